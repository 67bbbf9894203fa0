"""Forward-mode dual numbers over complex values.

A :class:`Dual` carries a value and its first derivative with respect to a
single real parameter.  Both parts may be Python scalars or numpy arrays, so
the same formula code evaluates a single point or a whole grid.
"""

import numpy as np


class Dual:
    """Complex dual number ``val + eps * d`` with ``d**2 == 0``."""

    __slots__ = ("val", "eps")
    # make numpy defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, val, eps=0.0):
        self.val = val
        self.eps = eps

    @classmethod
    def variable(cls, x):
        """Seed a real input: derivative 1 in every entry."""
        return cls(x, np.ones_like(x, dtype=float) if np.ndim(x) else 1.0)

    def __repr__(self):
        return f"Dual({self.val!r}, {self.eps!r})"

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.eps + other.eps)
        return Dual(self.val + other, self.eps)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.eps - other.eps)
        return Dual(self.val - other, self.eps)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.eps)

    def __neg__(self):
        return Dual(-self.val, -self.eps)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val, self.val * other.eps + self.eps * other.val)
        return Dual(self.val * other, self.eps * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.val / other.val,
                (self.eps * other.val - self.val * other.eps) / (other.val * other.val),
            )
        return Dual(self.val / other, self.eps / other)

    def __rtruediv__(self, other):
        return Dual(other / self.val, -other * self.eps / (self.val * self.val))

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("Dual only supports integer powers")
        if n == 0:
            return Dual(np.ones_like(self.val), np.zeros_like(self.eps))
        out = self
        for _ in range(abs(n) - 1):
            out = out * self
        return 1.0 / out if n < 0 else out

    def conjugate(self):
        return Dual(np.conjugate(self.val), np.conjugate(self.eps))

    @property
    def real(self):
        return Dual(np.real(self.val), np.real(self.eps))

    @property
    def imag(self):
        return Dual(np.imag(self.val), np.imag(self.eps))


def expi(x):
    """``exp(i x)`` for a real scalar, array or :class:`Dual`."""
    if isinstance(x, Dual):
        e = np.exp(1j * x.val)
        return Dual(e, 1j * e * x.eps)
    return np.exp(1j * np.asarray(x, dtype=float)) if np.ndim(x) else np.exp(1j * x)


def abs2(z):
    """Squared modulus, differentiable through :class:`Dual`."""
    return (z * z.conjugate()).real if isinstance(z, Dual) else np.real(z * np.conjugate(z))


def real(z):
    return z.real if isinstance(z, Dual) else np.real(z)


def conj(z):
    return z.conjugate() if isinstance(z, Dual) else np.conjugate(z)


def value(z):
    """Strip the derivative part."""
    return z.val if isinstance(z, Dual) else z


def derivative(z):
    return z.eps if isinstance(z, Dual) else np.zeros_like(np.real(z))
