"""Balance-equation residuals for media of dimension 0 to 3.

Each operator evaluates the left-hand sides of the ten balance equations
(mass, linear momentum, position quantity, angular momentum) for one medium
class, in the chart and frame conventions those equations are stated in:
angular balances about the current point, position-quantity balances about
the spatial origin of the chart.  A residual of zero means the field
satisfies the balance law at that chart point.

Derivatives are central differences (module fd); every operator accepts an
explicit step h and honors the field's domain bounds.
"""

from dataclasses import dataclass

import numpy as np

from . import fd
from .errors import DegenerateTangent
from .fields import (
    DEGENERATE_TANGENT_TOL,
    SECOND_DIFF_REL_STEP,
    CauchyMedium,
    Cosserat1DField,
    Cosserat3DState,
    ShellField,
    ShellLoads,
    shell_christoffels,
)
from .vecmath import skew


@dataclass
class BalanceResidual:
    """The ten balance residuals: 1 + 3 + 3 + 3 scalars.

    mass: scalar; lin_mom, pos_q, ang_mom: 3-vectors.  Operators with a
    different natural split (the thin-medium one) document how their rows
    map into these slots.
    """

    mass: float
    lin_mom: np.ndarray
    pos_q: np.ndarray
    ang_mom: np.ndarray

    def __post_init__(self):
        self.mass = float(self.mass)
        self.lin_mom = np.asarray(self.lin_mom, dtype=float).reshape(3)
        self.pos_q = np.asarray(self.pos_q, dtype=float).reshape(3)
        self.ang_mom = np.asarray(self.ang_mom, dtype=float).reshape(3)

    def as_array(self) -> np.ndarray:
        """All ten residuals: (mass, lin_mom, pos_q, ang_mom)."""
        return np.concatenate(
            [[self.mass], self.lin_mom, self.pos_q, self.ang_mom]
        )

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.as_array())))

    def to_dict(self) -> dict:
        return {
            "mass": self.mass,
            "linear_momentum": self.lin_mom.tolist(),
            "position_quantity": self.pos_q.tolist(),
            "angular_momentum": self.ang_mom.tolist(),
            "max_abs": self.max_abs(),
        }


def _as_chart_field(value):
    """Normalize a constant (scalar or array) or callable to a callable."""
    if callable(value):
        return value
    const = np.asarray(value, dtype=float)
    return lambda *args: const


def residual_pointwise(traj, conn, t: float, h: float = None) -> BalanceResidual:
    """Residuals of the four pointwise balance laws along a trajectory.

    traj: callable t -> PointwiseTorsor.  The equations: dm/dt = 0;
    dp/dt = m (g - 2 Omega x v); dq/dt = p (moments about the spatial
    origin, so x = q / m); dl/dt + Omega x l0 = x cross the momentum law's
    right side, with l0 = l - x x p the moment about the point itself.
    """
    pt = traj(t)
    m, p, q, l = pt.m, pt.p, pt.q, pt.l
    x = q / m
    v = p / m
    g = conn.g(t, x)
    Om = conn.Omega(t, x)
    m_dot = fd.diff(lambda u: traj(u).m, t, h=h)
    p_dot = fd.diff(lambda u: traj(u).p, t, h=h)
    q_dot = fd.diff(lambda u: traj(u).q, t, h=h)
    l_dot = fd.diff(lambda u: traj(u).l, t, h=h)
    l0 = l - np.cross(x, p)
    force = m * (g - 2.0 * np.cross(Om, v))
    return BalanceResidual(
        mass=m_dot,
        lin_mom=p_dot - force,
        pos_q=q_dot - p,
        ang_mom=l_dot + np.cross(Om, l0) - np.cross(x, force),
    )


# Row m of a cross-product-style array pairs the other two axes:
# entry m is the cyclic triple (i, j, k) with k = m.
_CYCLIC3 = ((1, 2, 0), (2, 0, 1), (0, 1, 2))


def _antisymmetry_rows(T):
    """pos and ang slots measuring T^{0i} - T^{i0} and T^{ji} - T^{ij}.

    The cyclic pairs in _CYCLIC3 are zero-based spatial indices; T is the
    full 4-by-4 matrix, so they are shifted past the time slot.
    """
    pos = T[0, 1:] - T[1:, 0]
    ang = np.array(
        [T[j + 1, i + 1] - T[i + 1, j + 1] for (i, j, _) in _CYCLIC3]
    )
    return pos, ang


def residual_cauchy(medium: CauchyMedium, conn, t: float, x,
                    h: float = None, one_sided: bool = False) -> BalanceResidual:
    """Residuals of the classical continuum equations at (t, x).

    mass: d rho/dt + div(rho v); momentum: rho [dv/dt + (grad v) v]
    - div sigma - rho (g - 2 Omega x v), the advective form obtained after
    subtracting v times the mass balance; position rows vanish structurally
    (both time-row components are rho v); angular rows measure the stress
    asymmetry sigma^{ij} - sigma^{ji} pairwise.
    """
    x = np.asarray(x, dtype=float).reshape(3)
    args = (t, x[0], x[1], x[2])
    bounds = medium.domain

    def rho_of(tt, a, b, c):
        return float(medium.rho(tt, np.array([a, b, c])))

    def v_of(tt, a, b, c):
        return np.asarray(medium.v(tt, np.array([a, b, c])), dtype=float)

    def sig_of(tt, a, b, c):
        return np.asarray(medium.sigma(tt, np.array([a, b, c])), dtype=float)

    rho = rho_of(*args)
    v = v_of(*args)
    sig = sig_of(*args)
    g = conn.g(t, x)
    Om = conn.Omega(t, x)

    d_rho = [fd.partial(rho_of, args, i, h=h, bounds=bounds,
                        one_sided=one_sided) for i in range(4)]
    d_v = [fd.partial(v_of, args, i, h=h, bounds=bounds,
                      one_sided=one_sided) for i in range(4)]
    d_sig = [fd.partial(sig_of, args, i, h=h, bounds=bounds,
                        one_sided=one_sided) for i in (1, 2, 3)]

    mass = d_rho[0] + sum(
        d_rho[i + 1] * v[i] + rho * d_v[i + 1][i] for i in range(3)
    )
    grad_v = np.stack(d_v[1:], axis=1)
    div_sig = np.array([sum(d_sig[j][i, j] for j in range(3)) for i in range(3)])
    lin = rho * (d_v[0] + grad_v @ v) - div_sig - rho * (g - 2.0 * np.cross(Om, v))
    ang = np.array([sig[i, j] - sig[j, i] for (i, j, _) in _CYCLIC3])
    return BalanceResidual(mass=mass, lin_mom=lin, pos_q=np.zeros(3), ang_mom=ang)


def _chart_slide(curve, tt, ss):
    """Tangential rate n . (d psi/dt) at which the chart itself slides.

    Zero for static charts and for charts that move only normally to
    themselves; equals v_t on a chart glued to the matter.  The step is
    widened because the result feeds further differences.
    """
    n = curve.n(tt, ss)
    h_t = SECOND_DIFF_REL_STEP * max(1.0, abs(tt))
    dpsi = fd.diff(lambda u: curve.psi(u, ss), tt, h=h_t)
    return float(n @ dpsi)


def residual_1d(f: Cosserat1DField, conn, t: float, s: float,
                h: float = None, one_sided: bool = False) -> BalanceResidual:
    """Residuals of the four slender-medium balance laws at (t, s).

    With the relative tangential speed w = v_t - n . (d psi/dt) of matter
    past the chart:
      mass: d rho_l/dt + d(rho_l w)/ds
      momentum: rho_l [dv/dt + (dv/ds) w] - dF/ds - rho_l (g - 2 Omega x v)
      position: dq/dt + d(l_star - (v_t - w) q)/ds - rho_l v
      angular: dl/dt + Omega x l + l_star x (Omega x n)
        + d(M_star - (v_t - w) l)/ds - n x F
    On a chart that does not slide along itself (any static chart in
    particular) w = v_t and the classical forms are recovered.  The fluxes
    l_star and M_star already carry the advective transport through the
    section, so only the chart's own slide is subtracted.

    Reference points: q and l_star are moments about the frame origin (q is
    rho_l times the section centroid position); l and M_star are moments
    about the section centroid itself, as in beam theory.
    """
    curve = f.curve
    n = curve.n(t, s)
    if np.linalg.norm(n) < DEGENERATE_TANGENT_TOL:
        raise DegenerateTangent(
            f"|d psi/ds| < {DEGENERATE_TANGENT_TOL} at (t={t}, s={s})"
        )
    psi = curve.psi(t, s)
    g = conn.g(t, psi)
    Om = conn.Omega(t, psi)
    args = (t, s)
    bounds = curve.domain

    def d(fn, i):
        return fd.partial(fn, args, i, h=h, bounds=bounds, one_sided=one_sided)

    def slide(tt, ss):
        return _chart_slide(curve, tt, ss)

    rho_l = float(f.rho_l(t, s))
    v = curve.v(t, s)
    mass = d(lambda tt, ss: float(f.rho_l(tt, ss)), 0) + d(
        lambda tt, ss: float(f.rho_l(tt, ss))
        * (curve.v_t(tt, ss) - slide(tt, ss)),
        1,
    )
    v_dot = curve.v_dot(t, s, h=h)
    dv_ds = d(curve.v, 1)
    lin = (
        rho_l * (v_dot + dv_ds * (curve.v_t(t, s) - slide(t, s)))
        - d(f.F, 1)
        - rho_l * (g - 2.0 * np.cross(Om, v))
    )
    pos = (
        d(f.q, 0)
        + d(lambda tt, ss: np.asarray(f.l_star(tt, ss), dtype=float)
            - slide(tt, ss) * np.asarray(f.q(tt, ss), dtype=float), 1)
        - rho_l * v
    )
    ang = (
        d(f.l, 0)
        + np.cross(Om, np.asarray(f.l(t, s), dtype=float))
        + np.cross(np.asarray(f.l_star(t, s), dtype=float), np.cross(Om, n))
        + d(lambda tt, ss: np.asarray(f.M_star(tt, ss), dtype=float)
            - slide(tt, ss) * np.asarray(f.l(tt, ss), dtype=float), 1)
        - np.cross(n, np.asarray(f.F(t, s), dtype=float))
    )
    return BalanceResidual(mass=mass, lin_mom=lin, pos_q=pos, ang_mom=ang)


def _surf_div_first(field_fn, args, G, trG, h, bounds, one_sided):
    """out[a] = d_b A[b, a] + Gamma^a_bc A[b, c] + Gamma^c_cb A[b, a]."""
    dA = [fd.partial(field_fn, args, i + 1, h=h, bounds=bounds,
                     one_sided=one_sided) for i in range(2)]
    A = np.asarray(field_fn(*args), dtype=float)
    term1 = sum(dA[b][b, :] for b in range(2))
    return term1 + np.einsum("abc,bc->a", G, A) + trG @ A


def _surf_div_second(field_fn, args, G, trG, h, bounds, one_sided):
    """out[a] = d_b M[a, b] + Gamma^a_bc M[c, b] + Gamma^b_bc M[a, c]."""
    dM = [fd.partial(field_fn, args, i + 1, h=h, bounds=bounds,
                     one_sided=one_sided) for i in range(2)]
    M = np.asarray(field_fn(*args), dtype=float)
    term1 = sum(dM[b][:, b] for b in range(2))
    return term1 + np.einsum("abc,cb->a", G, M) + M @ trG


def _surf_div_vec(field_fn, args, G, h, bounds, one_sided):
    """out = d_b Q[b] + Gamma^c_bc Q[b]."""
    dQ = [fd.partial(field_fn, args, i + 1, h=h, bounds=bounds,
                     one_sided=one_sided) for i in range(2)]
    Q = np.asarray(field_fn(*args), dtype=float)
    term1 = sum(dQ[b][b] for b in range(2))
    return term1 + np.einsum("cbc,b->", G, Q)


def residual_2d(sf: ShellField, loads: ShellLoads, conn, t: float,
                th1: float, th2: float, h: float = None,
                one_sided: bool = False) -> BalanceResidual:
    """Residuals of the thin-medium balance laws at (t, theta1, theta2).

    Slot layout: mass as usual; lin_mom = (in-plane 1, in-plane 2,
    off-plane); ang_mom = (in-plane scalar, off-plane 1, off-plane 2);
    pos_q holds the two transport identity rows of the rotary-inertia
    block: pos_q[0:2] = -kappa b^a_c w^c and pos_q[2] = -(kappa w^c)|_c.
    Those rows are invisible to the five displayed equations and vanish
    whenever the normal field is steady (w = 0), in statics in particular.

    The in-plane/off-plane equations:
      mass: d rho_s/dt + Phi^a_a rho_s
      in-plane momentum: (N^{ba} - kappa w^a w^b)|_b - b^a_b Q^b
        + c^a_i (rho_s (g - 2 Omega x v) - rho_s dv/dt)^i
      off-plane momentum: b_ab (N^{ba} - kappa w^a w^b) + Q^b|_b
        + n . (rho_s (g - 2 Omega x v) - rho_s dv/dt)
      in-plane angular: eps_cb (N^{cb} - b^c_a M^{ab}
        - kappa (Phi^c + w^c) w^b)
      off-plane angular: M^{ab}|_b - Q^a - kappa (dw^a/dt + Phi^a_b w^b
        + Phi^c_c w^a)
    """
    args = (t, th1, th2)
    bounds = sf.domain
    ch = shell_christoffels(sf, conn, t, th1, th2)
    a = sf.metric(t, th1, th2)
    c = sf.projector(t, th1, th2)
    n = sf.n(t, th1, th2)
    v = sf.v(t, th1, th2)
    w = sf.w_surf(t, th1, th2)
    x = sf.x(t, th1, th2)
    g = conn.g(t, x)
    Om = conn.Omega(t, x)

    rho_s_f = _as_chart_field(loads.rho_s)
    N_f = _as_chart_field(loads.N)
    Q_f = _as_chart_field(loads.Q)
    M_f = _as_chart_field(loads.M)
    kappa_f = _as_chart_field(loads.kappa)

    rho_s = float(rho_s_f(*args))
    N = np.asarray(N_f(*args), dtype=float)
    Q = np.asarray(Q_f(*args), dtype=float)
    M = np.asarray(M_f(*args), dtype=float)
    kappa = float(kappa_f(*args))

    G = ch.Gamma_abc
    trG = np.einsum("ccb->b", G)
    b_low = ch.b_ab
    b_mix = np.linalg.solve(a, b_low)

    mass = (
        fd.partial(lambda *u: float(rho_s_f(*u)), args, 0, h=h, bounds=bounds,
                   one_sided=one_sided)
        + np.trace(ch.Phi_ab) * rho_s
    )

    def X_f(*u):
        cw = sf.w_surf(*u)
        return (
            np.asarray(N_f(*u), dtype=float)
            - float(kappa_f(*u)) * np.outer(cw, cw)
        )

    X = X_f(*args)
    accel = rho_s * (g - 2.0 * np.cross(Om, v)) - rho_s * sf.v_dot(t, th1, th2)
    lin_in = (
        _surf_div_first(X_f, args, G, trG, h, bounds, one_sided)
        - b_mix @ Q
        + c @ accel
    )
    lin_off = (
        np.einsum("ab,ba->", b_low, X)
        + _surf_div_vec(lambda *u: np.asarray(Q_f(*u), dtype=float), args, G,
                        h, bounds, one_sided)
        + n @ accel
    )

    Y = N - b_mix @ M - kappa * np.outer(ch.Phi_a + w, w)
    ang_in = Y[0, 1] - Y[1, 0]
    w_dot = sf.w_surf_dot(t, th1, th2)
    ang_off = (
        _surf_div_second(lambda *u: np.asarray(M_f(*u), dtype=float), args, G,
                         trG, h, bounds, one_sided)
        - Q
        - kappa * (w_dot + ch.Phi_ab @ w + np.trace(ch.Phi_ab) * w)
    )

    def kw_f(*u):
        return float(kappa_f(*u)) * sf.w_surf(*u)

    id_03 = -_surf_div_vec(kw_f, args, G, h, bounds, one_sided)
    id_b0 = -kappa * (b_mix @ w)

    return BalanceResidual(
        mass=mass,
        lin_mom=np.array([lin_in[0], lin_in[1], lin_off]),
        pos_q=np.array([id_b0[0], id_b0[1], id_03]),
        ang_mom=np.array([ang_in, ang_off[0], ang_off[1]]),
    )


def residual_3d_cosserat(state: Cosserat3DState, conn, t: float, x,
                         h: float = None, one_sided: bool = False) -> BalanceResidual:
    """Residuals of the space-filling medium with moment fields at (t, x).

    T is indexed T[component, flux direction].  The equations, moments
    about the current point:
      mass: dT^{00}/dt + dT^{0i}/dx^i
      momentum: dT^{i0}/dt + dT^{ij}/dx^j - (T^{00} g^i
        - Omega^i_j (T^{0j} + T^{j0}))
      position: dq^i/dt + Omega^i_j q^j + d l_star^{ir}/dx^r
        + T^{0i} - T^{i0}
      angular (row k, (ijk) cyclic): dl^k/dt + d M_star^{km}/dx^m
        - (q x g)^k + (Omega x l)^k + Omega^j_r l_star^{ir}
        - Omega^i_r l_star^{jr} + T^{ji} - T^{ij}
    """
    x = np.asarray(x, dtype=float).reshape(3)
    args = (t, x[0], x[1], x[2])
    bounds = state.domain

    def field(fn):
        return lambda tt, a, b, c: np.asarray(fn(tt, np.array([a, b, c])),
                                              dtype=float)

    T_of = field(state.T)
    q_of = field(state.q)
    l_of = field(state.l)
    ls_of = field(state.l_star)
    Ms_of = field(state.M_star)

    def d(fn, i):
        return fd.partial(fn, args, i, h=h, bounds=bounds, one_sided=one_sided)

    T = T_of(*args)
    q = q_of(*args)
    l = l_of(*args)
    ls = ls_of(*args)
    g = conn.g(t, x)
    Om = conn.Omega(t, x)
    W = skew(Om)

    dT = [d(T_of, i) for i in range(4)]
    mass = dT[0][0, 0] + sum(dT[i + 1][0, i + 1] for i in range(3))
    lin = (
        dT[0][1:, 0]
        + np.array([sum(dT[j + 1][i + 1, j + 1] for j in range(3))
                    for i in range(3)])
        - (T[0, 0] * g - W @ (T[0, 1:] + T[1:, 0]))
    )

    d_ls = [d(ls_of, i + 1) for i in range(3)]
    pos, ang_T = _antisymmetry_rows(T)
    pos = (
        d(q_of, 0)
        + W @ q
        + np.array([sum(d_ls[r][i, r] for r in range(3)) for i in range(3)])
        + pos
    )

    d_Ms = [d(Ms_of, i + 1) for i in range(3)]
    div_Ms = np.array([sum(d_Ms[m][k, m] for m in range(3)) for k in range(3)])
    ls_terms = np.array([
        sum(W[j, r] * ls[i, r] - W[i, r] * ls[j, r] for r in range(3))
        for (i, j, _) in _CYCLIC3
    ])
    ang = (
        d(l_of, 0)
        + div_Ms
        - np.cross(q, g)
        + np.cross(Om, l)
        + ls_terms
        + ang_T
    )
    return BalanceResidual(mass=mass, lin_mom=lin, pos_q=pos, ang_mom=ang)
