"""Galilean connections, origin motion, and covariant divergence of torsors.

A Galilean connection is determined by two spatial fields on space-time:
the gravity g(t, x) and the spin Omega(t, x).  Its only nonzero Christoffel
symbols are Gamma^i_00 = -g^i and Gamma^i_0j = Gamma^i_j0 = skew(Omega)^i_j.

Covariant divergence of a torsor field living on a d-dimensional medium
needs three coefficient blocks: the material-chart Christoffels, the
space-time Christoffels, and the origin-motion matrix Gamma_A built from the
C field that fixes where the affine origin sits.
"""

from dataclasses import dataclass

import numpy as np

from . import fd
from .vecmath import skew


def _as_field(value):
    """Normalize a constant 3-vector or callable (t, x) -> (3,) to a callable."""
    if callable(value):
        return value
    const = np.asarray(value, dtype=float).reshape(3)
    return lambda t, x: const


class GalileanConnection:
    """Connection fields g(t, x) and Omega(t, x); constants accepted."""

    def __init__(self, g=(0.0, 0.0, 0.0), Omega=(0.0, 0.0, 0.0)):
        self.g = _as_field(g)
        self.Omega = _as_field(Omega)

    @classmethod
    def uniform(cls, g=(0.0, 0.0, 0.0), Omega=(0.0, 0.0, 0.0)):
        return cls(g=g, Omega=Omega)

    @classmethod
    def rotating_frame(cls, Omega):
        """Chart spinning rigidly at constant Omega inside an inertial world.

        Carries the centrifugal gravity g(x) = -Omega x (Omega x x) in
        addition to the spin; Coriolis terms enter through Omega itself.
        """
        Om = np.asarray(Omega, dtype=float).reshape(3)

        def g(t, x):
            return -np.cross(Om, np.cross(Om, np.asarray(x, dtype=float)))

        return cls(g=g, Omega=Om)

    def christoffels_at(self, t: float, x) -> np.ndarray:
        """(4, 4, 4) array G[a, m, b] = Gamma^a_mb at the event (t, x)."""
        x = np.asarray(x, dtype=float).reshape(3)
        G = np.zeros((4, 4, 4))
        G[1:, 0, 0] = -self.g(t, x)
        W = skew(self.Omega(t, x))
        G[1:, 0, 1:] = W
        G[1:, 1:, 0] = W
        return G

    def matrix(self, t: float, x, dX) -> np.ndarray:
        """Gamma(dX): the (4, 4) contraction G[a, m, b] dX^m."""
        dX = np.asarray(dX, dtype=float).reshape(4)
        return np.einsum("amb,m->ab", self.christoffels_at(t, x), dX)


class OriginMotion:
    """Motion of the affine origin as a C field (t, x) -> 4-column.

    C identically zero keeps the origin glued to the point itself (proper
    choice); C = (0, x) puts it at the spatial origin of the chart.
    """

    def __init__(self, C_field, label: str = "custom"):
        self.C = C_field
        self.label = label

    @classmethod
    def proper(cls) -> "OriginMotion":
        return cls(lambda t, x: np.zeros(4), label="proper")

    @classmethod
    def spatial_origin(cls) -> "OriginMotion":
        def C(t, x):
            out = np.zeros(4)
            out[1:] = np.asarray(x, dtype=float).reshape(3)
            return out

        return cls(C, label="spatial_origin")


def gamma_A_matrix(conn: GalileanConnection, origin: OriginMotion,
                   t: float, x, h: float = None) -> np.ndarray:
    """(4, 4) matrix Gamma_A with Gamma_A(dX) = dX - (dC + Gamma(dX) C).

    Column m holds Gamma_A(e_m).  The proper origin gives the identity
    matrix exactly; the spatial-origin choice gives first column
    (1, -Omega x x) and zero spatial columns.
    """
    x = np.asarray(x, dtype=float).reshape(3)
    if origin.label == "proper":
        return np.eye(4)

    def C_of(tt, x1, x2, x3):
        return origin.C(tt, np.array([x1, x2, x3]))

    args = (t, x[0], x[1], x[2])
    DC = np.stack(
        [fd.partial(C_of, args, i, h=h) for i in range(4)], axis=1
    )
    G = conn.christoffels_at(t, x)
    GC = np.einsum("amb,b->am", G, origin.C(t, x))
    return np.eye(4) - DC - GC


def gamma_A_at(conn: GalileanConnection, origin: OriginMotion,
               t: float, x, dX, h: float = None) -> np.ndarray:
    """Gamma_A(dX) as a 4-column at the event (t, x)."""
    dX = np.asarray(dX, dtype=float).reshape(4)
    return gamma_A_matrix(conn, origin, t, x, h=h) @ dX


@dataclass
class PullbackChristoffels:
    """Connection coefficients needed by the divergence at one chart point.

    material: (d+1, d+1, d+1) Christoffels of the material chart.
    spacetime: (4, 4, 4) Christoffels of the ambient connection.
    origin_motion: (4, 4) matrix Gamma_A.
    """

    material: np.ndarray
    spacetime: np.ndarray
    origin_motion: np.ndarray

    def __post_init__(self):
        self.material = np.asarray(self.material, dtype=float)
        self.spacetime = np.asarray(self.spacetime, dtype=float)
        self.origin_motion = np.asarray(self.origin_motion, dtype=float)

    @classmethod
    def identity_embedding(cls, conn: GalileanConnection, t: float, x,
                           origin: OriginMotion = None) -> "PullbackChristoffels":
        """Medium filling space: material chart is the space-time chart.

        Default origin is the proper one (Gamma_A = identity).
        """
        G = conn.christoffels_at(t, x)
        if origin is None:
            GA = np.eye(4)
        else:
            GA = gamma_A_matrix(conn, origin, t, x)
        return cls(material=G, spacetime=G, origin_motion=GA)


def _sum_row_derivatives(field_fn, xi, h, one_sided, domain):
    """Sum over g of d/dxi^g applied to row g of field_fn(xi)."""
    total = None
    for g in range(len(xi)):
        def slice_fn(u, g=g):
            probe = np.array(xi, dtype=float)
            probe[g] = u
            return np.asarray(field_fn(probe), dtype=float)[g]

        lo = hi = None
        if domain is not None and domain[g] is not None:
            lo, hi = domain[g]
        der = fd.diff(slice_fn, xi[g], h=h, lo=lo, hi=hi, one_sided=one_sided)
        total = der if total is None else total + der
    return total


def div_T(field, xi, chris: PullbackChristoffels, h: float = None,
          one_sided: bool = False) -> np.ndarray:
    """Covariant divergence of the linear part: a 4-column.

    d(gT^b)/dxi^g + Gamma^g_gr (rT^b) + (gT^r) U^s_g Gamma^b_sr, where the
    material index g is summed against the derivative, the material-chart
    Christoffels enter through their trace, and the last term pulls the
    space-time Christoffels back through the tangent map U.
    """
    xi = np.asarray(xi, dtype=float)
    domain = getattr(field, "domain", None)
    dT = _sum_row_derivatives(field.torsor_T, xi, h, one_sided, domain)
    T = np.asarray(field.torsor_T(xi), dtype=float)
    U = np.asarray(field.tangent_map(xi), dtype=float)
    trG = np.einsum("ggr->r", chris.material)
    out = dT + trG @ T
    out += np.einsum("gr,sg,bsr->b", T, U, chris.spacetime)
    return out


def div_J(field, xi, chris: PullbackChristoffels, h: float = None,
          one_sided: bool = False) -> np.ndarray:
    """Covariant divergence of the moment part: a skew (4, 4) matrix.

    Adds to the J-field terms the origin-motion coupling
    U^s_g Gamma_A[a, s] (gT^b) - (gT^a) U^s_g Gamma_A[b, s], which is what
    makes the moment balance see the linear part.  Output is re-skewed.
    """
    xi = np.asarray(xi, dtype=float)
    domain = getattr(field, "domain", None)
    dJ = _sum_row_derivatives(field.torsor_J, xi, h, one_sided, domain)
    J = np.asarray(field.torsor_J(xi), dtype=float)
    T = np.asarray(field.torsor_T(xi), dtype=float)
    U = np.asarray(field.tangent_map(xi), dtype=float)
    GA = chris.origin_motion
    out = dJ
    out = out + np.einsum("grb,sg,asr->ab", J, U, chris.spacetime)
    out = out + np.einsum("gar,sg,bsr->ab", J, U, chris.spacetime)
    out = out + np.einsum("ggr,rab->ab", chris.material, J)
    out = out + np.einsum("sg,as,gb->ab", U, GA, T)
    out = out - np.einsum("ga,sg,bs->ab", T, U, GA)
    return 0.5 * (out - out.T)
