"""Named analytic scenario cases: field bundles with their reference checks.

Each case couples a set of closed-form or manufactured fields to the checks
a scenario run evaluates, so the command-line runner stays a thin dispatch
layer.  The connection enters through a validated ConnSpec parsed from the
scenario file, which keeps the file the single source of truth for frame
numbers; cases derive their reference solutions from those numbers, so an
edited connection changes the physics rather than being ignored.  Every
bundled case is deterministic for a fixed seed.
"""

from dataclasses import dataclass, field

import numpy as np

from .affine import PointwiseTorsor
from .balance import (
    residual_1d,
    residual_2d,
    residual_3d_cosserat,
    residual_cauchy,
    residual_pointwise,
)
from .connection import GalileanConnection
from .errors import ScenarioError
from .fields import (
    CauchyMedium,
    Cosserat1DField,
    Cosserat3DState,
    Curve1D,
    ShellField,
    ShellLoads,
    assemble_cauchy_T,
)
from .reduction import (
    CrossSection,
    ThicknessRule,
    projector_matrix,
    reduce_3d_to_1d_J,
    reduce_3d_to_1d_T,
    reduce_3d_to_1d_force_mass,
    reduce_3d_to_2d,
)
from .simulate import (
    TRAJECTORY_CSV_HEADER,
    IntegratorConfig,
    PointwiseState,
    convergence_check,
    run_scenario,
)

RESIDUAL_COLUMNS = (
    "res_mass,res_lin1,res_lin2,res_lin3,"
    "res_pos1,res_pos2,res_pos3,res_ang1,res_ang2,res_ang3"
)

CONNECTION_TYPES = ("uniform", "rotating_frame", "case")


@dataclass
class ConnSpec:
    """Connection block of a scenario file: a frame, not yet callables.

    type "uniform" holds constant g and Omega; "rotating_frame" adds the
    centrifugal field -Omega x (Omega x x) on top of g; "case" declares
    that the case supplies its own position-dependent connection (used
    where no constant spec can express it, e.g. a radial pull).
    """

    type: str = "uniform"
    g: np.ndarray = None
    Omega: np.ndarray = None

    def __post_init__(self):
        if self.type not in CONNECTION_TYPES:
            raise ScenarioError(
                f"connection.type: unknown value {self.type!r}, expected "
                f"one of {sorted(CONNECTION_TYPES)}"
            )
        self.g = _vec3_key(self.g, "connection.g")
        self.Omega = _vec3_key(self.Omega, "connection.Omega")

    @classmethod
    def from_dict(cls, d) -> "ConnSpec":
        if not isinstance(d, dict):
            raise ScenarioError("connection: must be an object")
        unknown = set(d) - {"type", "g", "Omega"}
        if unknown:
            raise ScenarioError(
                f"connection.{sorted(unknown)[0]}: unknown key"
            )
        return cls(type=d.get("type", "uniform"), g=d.get("g"),
                   Omega=d.get("Omega"))

    def build(self) -> GalileanConnection:
        if self.type == "case":
            raise ScenarioError(
                "connection.type: 'case' is only valid for scenarios whose "
                "case defines its own connection"
            )
        if self.type == "rotating_frame":
            g0 = self.g.copy()
            Om = self.Omega.copy()

            def g_total(t, x):
                x = np.asarray(x, dtype=float)
                return g0 - np.cross(Om, np.cross(Om, x))

            return GalileanConnection(g=g_total, Omega=Om)
        return GalileanConnection(g=self.g, Omega=self.Omega)


def _vec3_key(value, key):
    if value is None:
        return np.zeros(3)
    try:
        out = np.asarray(value, dtype=float).reshape(3)
    except (TypeError, ValueError):
        raise ScenarioError(f"{key}: expected 3 numbers, got {value!r}")
    if not np.all(np.isfinite(out)):
        raise ScenarioError(f"{key}: entries must be finite")
    return out


@dataclass
class Check:
    """One pass/fail line: measured value against its tolerance."""

    name: str
    value: float
    tol: float

    def passed(self, scale: float = 1.0) -> bool:
        return self.value <= self.tol * scale


@dataclass
class Table:
    """A CSV artifact: file stem, comma-joined header, numeric rows."""

    name: str
    header: str
    rows: np.ndarray


@dataclass
class CaseResult:
    checks: list
    tables: list = field(default_factory=list)


@dataclass
class CaseSpec:
    kind: str
    medium: str
    summary: str
    defaults: dict
    build: callable


CASES = {}

# kind -> media it may legally pair with
KIND_MEDIA = {
    "pointwise_sim": {"d0"},
    "residual_check": {"d0", "d1", "d2", "d3_cauchy", "d3_cosserat"},
    "reduction": {"d1", "d2"},
    "convergence": {"d1", "d3_cauchy"},
}


def _case(name, kind, medium, summary, defaults=None):
    def wrap(fn):
        CASES[name] = CaseSpec(
            kind=kind, medium=medium, summary=summary,
            defaults=dict(defaults or {}), build=fn,
        )
        return fn
    return wrap


def _traj_table(traj):
    return Table("trajectory", TRAJECTORY_CSV_HEADER, traj.rows())


def _residual_table(coord_header, coord_rows, residuals):
    rows = np.array([
        np.concatenate([c, r, [np.max(np.abs(r))]])
        for c, r in zip(coord_rows, residuals)
    ])
    header = coord_header + "," + RESIDUAL_COLUMNS + ",max_abs"
    return Table("residuals", header, rows)


def _worst(residuals):
    return max(float(np.max(np.abs(r))) for r in residuals)


def _axis_rotation(axis, angle):
    """Rodrigues rotation about a unit axis."""
    K = np.array([
        [0.0, -axis[2], axis[1]],
        [axis[2], 0.0, -axis[0]],
        [-axis[1], axis[0], 0.0],
    ])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


# ---------------------------------------------------------------------------
# pointwise trajectories


@_case(
    "free_particle", "pointwise_sim", "d0",
    "Free point mass in an inertial frame: straight-line motion with every "
    "conserved quantity flat.",
    defaults={"dt": 1e-2, "t_end": 2.0, "stride": 10},
)
def _free_particle(p, rng, conn_spec):
    conn = conn_spec.build()
    init = PointwiseState.from_proper(
        0.0, 2.5, [0.3, -0.2, 0.1], [1.0, 0.4, -0.7], [0.2, 0.0, -0.1]
    )
    traj = run_scenario(init, conn, IntegratorConfig(
        dt=p["dt"], t_end=p["t_end"], output_stride=p["stride"]))
    rep = traj.drift_report()
    err = max(
        float(np.max(np.abs(s.x - (init.x + init.v * s.t))))
        for s in traj.states
    )
    fin = traj.final
    checks = [
        Check("straight-line position", err, 1e-12),
        Check("mass drift", rep["mass_drift"], 0.0),
        Check("q - m x drift", rep["pos_q_drift"], 1e-12),
        Check("proper spin drift",
              float(np.max(np.abs(fin.l0 - init.l0))), 1e-12),
    ]
    return CaseResult(checks, [_traj_table(traj)])


@_case(
    "projectile", "pointwise_sim", "d0",
    "Point mass under uniform gravity: the integrator reproduces the "
    "parabola to roundoff and q tracks m x.",
    defaults={"dt": 1e-3, "t_end": 1.0, "stride": 100},
)
def _projectile(p, rng, conn_spec):
    g = conn_spec.g
    conn = conn_spec.build()
    m = 1.3
    x0 = np.array([0.1, -0.4, 2.0])
    v0 = np.array([3.0, 1.0, 5.0])
    init = PointwiseState.from_proper(0.0, m, x0, v0, [0.4, -0.1, 0.2])
    traj = run_scenario(init, conn, IntegratorConfig(
        dt=p["dt"], t_end=p["t_end"], output_stride=p["stride"]))
    fin = traj.final
    t = fin.t
    err_x = float(np.max(np.abs(fin.x - (x0 + v0 * t + 0.5 * g * t * t))))
    err_p = float(np.max(np.abs(fin.p - m * (v0 + g * t))))
    rep = traj.drift_report()
    checks = [
        Check("final position vs parabola", err_x, 1e-12),
        Check("final momentum", err_p, 1e-12),
        Check("mass drift", rep["mass_drift"], 0.0),
        Check("q - m x drift", rep["pos_q_drift"], 1e-10),
    ]
    return CaseResult(checks, [_traj_table(traj)])


@_case(
    "coriolis_rotating_frame", "pointwise_sim", "d0",
    "Free particle watched from a chart spinning about e3 (centrifugal "
    "gravity plus Coriolis force): matches the rotated straight line.",
    defaults={"dt": 1e-4, "t_end": 1.0, "stride": 1000},
)
def _coriolis(p, rng, conn_spec):
    w = conn_spec.Omega[2]
    conn = conn_spec.build()
    m = 1.7
    x0 = np.array([0.5, -0.2, 0.3])
    v0 = np.array([0.4, 1.1, -0.6])
    l00 = np.array([0.3, -0.5, 0.2])
    init = PointwiseState.from_proper(0.0, m, x0, v0, l00)
    traj = run_scenario(init, conn, IntegratorConfig(
        dt=p["dt"], t_end=p["t_end"], output_stride=p["stride"]))
    e3 = np.array([0.0, 0.0, 1.0])
    v_in = v0 + w * np.cross(e3, x0)
    err = 0.0
    for s in traj.states:
        R = _axis_rotation(e3, -w * s.t)
        x_ref = R @ (x0 + v_in * s.t)
        v_ref = R @ v_in - w * np.cross(e3, x_ref)
        l_ref = np.cross(x_ref, m * v_ref) + R @ l00
        err = max(
            err,
            float(np.max(np.abs(s.x - x_ref))),
            float(np.max(np.abs(s.p - m * v_ref))),
            float(np.max(np.abs(s.q - m * x_ref))),
            float(np.max(np.abs(s.l - l_ref))),
        )
    rep = traj.drift_report()
    checks = [
        Check("state vs transformed inertial line", err, 1e-8),
        Check("mass drift", rep["mass_drift"], 0.0),
        Check("q - m x drift", rep["pos_q_drift"], 1e-8),
    ]
    return CaseResult(checks, [_traj_table(traj)])


@_case(
    "gravity_top", "pointwise_sim", "d0",
    "Spinning point mass falling in uniform gravity: the moment component "
    "along g and the proper spin both stay constant.",
    defaults={"dt": 1e-3, "t_end": 2.0, "stride": 100},
)
def _gravity_top(p, rng, conn_spec):
    g = conn_spec.g
    g_hat = g / np.linalg.norm(g)
    conn = conn_spec.build()
    init = PointwiseState.from_proper(
        0.0, 1.2, [0.6, 0.0, 1.0], [0.3, 1.1, 2.0], [0.2, 0.1, 1.5]
    )
    traj = run_scenario(init, conn, IntegratorConfig(
        dt=p["dt"], t_end=p["t_end"], output_stride=p["stride"]))
    lg_err = max(
        abs(float((s.l - init.l) @ g_hat)) for s in traj.states
    )
    l0_err = max(
        float(np.max(np.abs(s.l0 - init.l0))) for s in traj.states
    )
    rep = traj.drift_report()
    checks = [
        Check("moment along gravity conservation", lg_err, 1e-10),
        Check("proper spin conservation", l0_err, 1e-10),
        Check("mass drift", rep["mass_drift"], 0.0),
    ]
    return CaseResult(checks, [_traj_table(traj)])


@_case(
    "spinning_frame_precession", "pointwise_sim", "d0",
    "Proper spin in a uniformly spinning chart precesses about the axis "
    "at the chart rate, preserving its length and axial component.",
    defaults={"dt": 1e-3, "t_end": 3.0, "stride": 100},
)
def _precession(p, rng, conn_spec):
    Om = conn_spec.Omega
    w = float(np.linalg.norm(Om))
    if w == 0.0:
        raise ScenarioError("connection.Omega: must be nonzero for this case")
    axis = Om / w
    conn = conn_spec.build()
    l00 = np.array([0.5, 0.2, 0.9])
    init = PointwiseState.from_proper(
        0.0, 1.0, [0.2, 0.1, -0.3], [0.4, -0.2, 0.5], l00
    )
    traj = run_scenario(init, conn, IntegratorConfig(
        dt=p["dt"], t_end=p["t_end"], output_stride=p["stride"]))
    cone_err = max(
        float(np.max(np.abs(s.l0 - _axis_rotation(axis, -w * s.t) @ l00)))
        for s in traj.states
    )
    norm_err = max(
        abs(float(np.linalg.norm(s.l0)) - float(np.linalg.norm(l00)))
        for s in traj.states
    )
    axial_err = max(
        abs(float((s.l0 - l00) @ axis)) for s in traj.states
    )
    checks = [
        Check("precession cone vs closed form", cone_err, 1e-8),
        Check("spin magnitude conservation", norm_err, 1e-10),
        Check("axial spin conservation", axial_err, 1e-10),
    ]
    return CaseResult(checks, [_traj_table(traj)])


# ---------------------------------------------------------------------------
# residual checks: d0


@_case(
    "projectile_residual", "residual_check", "d0",
    "The four pointwise balance laws evaluated along the closed-form "
    "parabola; every residual vanishes to differencing accuracy.",
    defaults={"n_t": 9, "t_span": [0.1, 2.0]},
)
def _projectile_residual(p, rng, conn_spec):
    g = conn_spec.g
    conn = conn_spec.build()
    m = 1.3
    x0 = np.array([0.1, -0.4, 2.0])
    v0 = np.array([3.0, 1.0, 5.0])
    l00 = np.array([0.4, -0.1, 0.2])

    def traj(t):
        x = x0 + v0 * t + 0.5 * g * t * t
        mom = m * (v0 + g * t)
        return PointwiseTorsor(m, mom, m * x, l00 + np.cross(x, mom))

    ts = np.linspace(p["t_span"][0], p["t_span"][1], p["n_t"])
    coords, residuals = [], []
    for t in ts:
        res = residual_pointwise(traj, conn, float(t))
        coords.append([t])
        residuals.append(res.as_array())
    return CaseResult(
        [Check("pointwise residual on parabola", _worst(residuals), 1e-8)],
        [_residual_table("t", coords, residuals)],
    )


# ---------------------------------------------------------------------------
# residual checks: d3_cauchy


def manufactured_cauchy(g=(0.1, -0.2, 0.3), Omega=(0.2, -0.1, 0.3)):
    """Smooth sin/exp 3D fields with a hand-expanded exact residual.

    Returns (medium, conn, exact) where exact(t, x) is the ten-component
    residual array the evaluator must converge to; g and Omega are the
    uniform frame fields the expansion absorbs.  The expansion is verified
    against an independent symbolic derivation in the test suite.
    """
    g = np.asarray(g, dtype=float).reshape(3)
    Om = np.asarray(Omega, dtype=float).reshape(3)
    conn = GalileanConnection(g=g, Omega=Om)

    def rho(t, x):
        return 2.0 + 0.3 * np.sin(x[0] + 2.0 * t)

    def v(t, x):
        return np.array([
            0.4 * np.sin(x[1]),
            0.2 * np.cos(x[0]),
            0.3 * np.sin(x[0] + t),
        ])

    def sigma(t, x):
        x1, x2, x3 = x
        return np.array([
            [0.5 * np.sin(x1 + x2), 0.1 * np.sin(x2 - x3),
             0.2 * np.exp(x3 / 3.0)],
            [0.2 * np.cos(x1), 0.3 * np.sin(x2 + t), 0.1 * np.sin(x3)],
            [0.3 * np.exp(x1 / 4.0), 0.2 * np.cos(x2),
             0.4 * np.cos(x1 + x3)],
        ])

    def exact(t, x):
        x1, x2, x3 = x
        mass = np.cos(x1 + 2.0 * t) * (0.6 + 0.12 * np.sin(x2))
        accel = np.array([
            0.08 * np.cos(x1) * np.cos(x2),
            -0.08 * np.sin(x1) * np.sin(x2),
            0.3 * np.cos(x1 + t) * (1.0 + 0.4 * np.sin(x2)),
        ])
        div_sig = np.array([
            0.5 * np.cos(x1 + x2) + 0.1 * np.cos(x2 - x3)
            + (0.2 / 3.0) * np.exp(x3 / 3.0),
            -0.2 * np.sin(x1) + 0.3 * np.cos(x2 + t) + 0.1 * np.cos(x3),
            0.075 * np.exp(x1 / 4.0) - 0.2 * np.sin(x2)
            - 0.4 * np.sin(x1 + x3),
        ])
        r = rho(t, x)
        vv = v(t, x)
        sig = sigma(t, x)
        lin = r * accel - div_sig - r * (g - 2.0 * np.cross(Om, vv))
        ang = np.array([
            sig[1, 2] - sig[2, 1],
            sig[2, 0] - sig[0, 2],
            sig[0, 1] - sig[1, 0],
        ])
        return np.concatenate([[mass], lin, np.zeros(3), ang])

    return CauchyMedium(rho=rho, v=v, sigma=sigma), conn, exact


@_case(
    "cauchy_manufactured", "residual_check", "d3_cauchy",
    "Manufactured sin/exp classical-medium fields: the evaluated residual "
    "is compared against its exact expansion over a probe grid.",
    defaults={"h": 1e-5, "n_side": 3, "t": 0.4, "half_width": 0.5,
              "n_random": 5},
)
def _cauchy_manufactured(p, rng, conn_spec):
    medium, conn, exact = manufactured_cauchy(conn_spec.g, conn_spec.Omega)
    side = np.linspace(-p["half_width"], p["half_width"], p["n_side"])
    pts = [np.array([a, b, c]) for a in side for b in side for c in side]
    if p["n_random"] > 0:
        pts += list(rng.uniform(-p["half_width"], p["half_width"],
                                size=(int(p["n_random"]), 3)))
    t = p["t"]
    coords, residuals, errs = [], [], []
    for x in pts:
        res = residual_cauchy(medium, conn, t, x, h=p["h"]).as_array()
        coords.append(np.concatenate([[t], x]))
        residuals.append(res)
        errs.append(float(np.max(np.abs(res - exact(t, x)))))
    return CaseResult(
        [Check("residual vs exact expansion", max(errs), 1e-5)],
        [_residual_table("t,x1,x2,x3", coords, residuals)],
    )


@_case(
    "hydrostatic", "residual_check", "d3_cauchy",
    "Fluid at rest under uniform gravity with the linear pressure field: "
    "all ten residuals vanish.",
    defaults={"n_side": 3, "half_width": 1.0, "rho0": 2.0},
)
def _hydrostatic(p, rng, conn_spec):
    rho0 = p["rho0"]
    g = conn_spec.g
    conn = conn_spec.build()
    medium = CauchyMedium(
        rho=lambda t, x: rho0,
        v=lambda t, x: np.zeros(3),
        sigma=lambda t, x: -rho0 * float(g @ np.asarray(x)) * np.eye(3),
    )
    side = np.linspace(-p["half_width"], p["half_width"], p["n_side"])
    coords, residuals = [], []
    for a in side:
        for b in side:
            for c in side:
                x = np.array([a, b, c])
                coords.append(np.concatenate([[0.0], x]))
                residuals.append(
                    residual_cauchy(medium, conn, 0.0, x).as_array()
                )
    return CaseResult(
        [Check("hydrostatic residual", _worst(residuals), 1e-8)],
        [_residual_table("t,x1,x2,x3", coords, residuals)],
    )


@_case(
    "rotating_bucket", "residual_check", "d3_cauchy",
    "Liquid at rest in a spinning chart: quadratic centrifugal pressure "
    "balances gravity plus the frame forces.",
    defaults={"n_side": 3, "half_width": 0.8, "rho0": 1.0},
)
def _rotating_bucket(p, rng, conn_spec):
    rho0 = p["rho0"]
    g0 = conn_spec.g
    Om = conn_spec.Omega

    def sigma(t, x):
        x = np.asarray(x, dtype=float)
        wx = np.cross(Om, x)
        pr = rho0 * (float(g0 @ x) + 0.5 * float(wx @ wx))
        return -pr * np.eye(3)

    conn = conn_spec.build()
    medium = CauchyMedium(
        rho=lambda t, x: rho0, v=lambda t, x: np.zeros(3), sigma=sigma,
    )
    side = np.linspace(-p["half_width"], p["half_width"], p["n_side"])
    coords, residuals = [], []
    for a in side:
        for b in side:
            for c in side:
                x = np.array([a, b, c])
                coords.append(np.concatenate([[0.0], x]))
                residuals.append(
                    residual_cauchy(medium, conn, 0.0, x).as_array()
                )
    return CaseResult(
        [Check("spinning-bucket residual", _worst(residuals), 1e-8)],
        [_residual_table("t,x1,x2,x3", coords, residuals)],
    )


# ---------------------------------------------------------------------------
# residual checks: d1


@_case(
    "beam_under_gravity", "residual_check", "d1",
    "Straight beam loaded by uniform gravity: linear internal force and "
    "quadratic bending moment close all four balance laws.",
    defaults={"n_s": 9, "length": 2.0, "rho_l": 1.6},
)
def _beam_under_gravity(p, rng, conn_spec):
    rho_l = p["rho_l"]
    g = conn_spec.g
    conn = conn_spec.build()
    e1 = np.array([1.0, 0.0, 0.0])
    n_cross_g = np.cross(e1, g)
    rod = Curve1D(
        lambda t, s: np.array([s, 0.0, 0.0]), n=lambda t, s: e1,
    )
    zero3 = lambda t, s: np.zeros(3)  # noqa: E731
    f = Cosserat1DField(
        curve=rod,
        rho_l=lambda t, s: rho_l,
        F=lambda t, s: -rho_l * s * g,
        q=lambda t, s: rho_l * np.array([s, 0.0, 0.0]),
        l=zero3,
        l_star=zero3,
        M_star=lambda t, s: -rho_l * s * s / 2.0 * n_cross_g,
    )
    ss = np.linspace(0.1, p["length"], p["n_s"])
    coords, residuals = [], []
    for s in ss:
        coords.append([0.0, s])
        residuals.append(residual_1d(f, conn, 0.0, float(s)).as_array())
    return CaseResult(
        [Check("beam equilibrium residual", _worst(residuals), 1e-9)],
        [_residual_table("t,s", coords, residuals)],
    )


@_case(
    "spinning_ring", "residual_check", "d1",
    "Ring of matter circulating along a static circular chart: hoop "
    "tension rho w^2 r^2 supplies the centripetal force.",
    defaults={"n_s": 8, "radius": 1.2, "omega": 0.9, "rho_l": 2.0},
)
def _spinning_ring(p, rng, conn_spec):
    r, w, rho_l = p["radius"], p["omega"], p["rho_l"]
    tension = rho_l * w * w * r * r

    def psi(t, s):
        return np.array([r * np.cos(s / r), r * np.sin(s / r), 0.0])

    def n(t, s):
        return np.array([-np.sin(s / r), np.cos(s / r), 0.0])

    ring = Curve1D(psi, v=lambda t, s: w * r * n(t, s), n=n)
    zero3 = lambda t, s: np.zeros(3)  # noqa: E731
    f = Cosserat1DField(
        curve=ring,
        rho_l=lambda t, s: rho_l,
        F=lambda t, s: tension * n(t, s),
        q=lambda t, s: rho_l * psi(t, s),
        l=zero3,
        l_star=lambda t, s: rho_l * (w * r) * psi(t, s),
        M_star=zero3,
    )
    conn = conn_spec.build()
    ss = np.linspace(0.0, 2.0 * np.pi * r, p["n_s"], endpoint=False)
    coords, residuals = [], []
    for s in ss:
        coords.append([0.0, s])
        residuals.append(residual_1d(f, conn, 0.0, float(s)).as_array())
    return CaseResult(
        [Check("hoop-tension residual", _worst(residuals), 1e-6)],
        [_residual_table("t,s", coords, residuals)],
    )


# ---------------------------------------------------------------------------
# residual checks: d2


def _flat_plate():
    return ShellField(
        lambda t, th1, th2: np.array([th1, th2, 0.0]),
        pi=lambda t, th1, th2: np.array(
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
        ),
    )


@_case(
    "plate_bending", "residual_check", "d2",
    "Flat plate carrying a transverse gravity load through shear and a "
    "quadratic bending moment.",
    defaults={"n_side": 3, "half_width": 0.7, "rho_s": 2.0},
)
def _plate_bending(p, rng, conn_spec):
    rho_s = p["rho_s"]
    g3 = conn_spec.g[2]
    conn = conn_spec.build()
    loads = ShellLoads(
        rho_s=lambda *a: rho_s,
        N=lambda *a: np.array([[0.7, 0.2], [0.2, -0.1]]),
        Q=lambda t, th1, th2: -rho_s * g3 * np.array([th1, 0.0]),
        M=lambda t, th1, th2: -rho_s * g3 * np.array(
            [[th1 ** 2 / 2.0, 0.0], [0.0, 0.0]]
        ),
        kappa=lambda *a: 0.05,
    )
    sf = _flat_plate()
    side = np.linspace(-p["half_width"], p["half_width"], p["n_side"])
    coords, residuals = [], []
    for a in side:
        for b in side:
            res = residual_2d(sf, loads, conn, 0.0, float(a), float(b))
            coords.append([0.0, a, b])
            residuals.append(res.as_array())
    return CaseResult(
        [Check("plate bending residual", _worst(residuals), 1e-8)],
        [_residual_table("t,th1,th2", coords, residuals)],
    )


@_case(
    "laplace_sphere", "residual_check", "d2",
    "Uniformly tensioned spherical membrane against the normal pressure "
    "2 T / r: the classical pressure-curvature balance.",
    defaults={"n_side": 3, "half_width": 0.5, "radius": 2.0,
              "tension": 0.7, "rho_s": 1.0},
)
def _laplace_sphere(p, rng, conn_spec):
    if conn_spec.type != "case":
        raise ScenarioError(
            "connection.type: laplace_sphere defines its own radial pull; "
            "set type to 'case'"
        )
    r, T0, rho_s = p["radius"], p["tension"], p["rho_s"]
    pr = 2.0 * T0 / r

    def chart(t, th1, th2):
        return np.array([th1, th2, np.sqrt(r * r - th1 ** 2 - th2 ** 2)])

    def pi(t, th1, th2):
        z = np.sqrt(r * r - th1 ** 2 - th2 ** 2)
        return np.array([[1.0, 0.0, -th1 / z], [0.0, 1.0, -th2 / z]])

    def a_inv(th1, th2):
        z2 = r * r - th1 ** 2 - th2 ** 2
        a = np.eye(2) + np.outer([th1, th2], [th1, th2]) / z2
        return np.linalg.inv(a)

    sphere = ShellField(chart, pi=pi)
    loads = ShellLoads(
        rho_s=lambda *a: rho_s,
        N=lambda t, th1, th2: T0 * a_inv(th1, th2),
        Q=lambda *a: np.zeros(2),
        M=lambda *a: np.zeros((2, 2)),
        kappa=lambda *a: 0.01,
    )
    conn = GalileanConnection(
        g=lambda t, x: (pr / rho_s) * np.asarray(x, dtype=float) / r
    )
    side = np.linspace(-p["half_width"], p["half_width"], p["n_side"])
    coords, residuals = [], []
    for a in side:
        for b in side:
            res = residual_2d(sphere, loads, conn, 0.0, float(a), float(b))
            coords.append([0.0, a, b])
            residuals.append(res.as_array())
    return CaseResult(
        [Check("membrane pressure residual", _worst(residuals), 1e-7)],
        [_residual_table("t,th1,th2", coords, residuals)],
    )


@_case(
    "spinning_drum", "residual_check", "d2",
    "Cylindrical shell at rest in its co-rotating chart: hoop membrane "
    "force rho w^2 R^2 carries the centrifugal load.",
    defaults={"n_side": 3, "radius": 1.5, "rho_s": 0.8},
)
def _spinning_drum(p, rng, conn_spec):
    R, rho_s = p["radius"], p["rho_s"]
    w = conn_spec.Omega[2]

    def chart(t, th1, th2):
        return np.array([R * np.cos(th1 / R), R * np.sin(th1 / R), th2])

    def pi(t, th1, th2):
        return np.array(
            [[-np.sin(th1 / R), np.cos(th1 / R), 0.0], [0.0, 0.0, 1.0]]
        )

    drum = ShellField(chart, pi=pi)
    loads = ShellLoads(
        rho_s=lambda *a: rho_s,
        N=lambda *a: np.array([[rho_s * w * w * R * R, 0.0], [0.0, 0.0]]),
        Q=lambda *a: np.zeros(2),
        M=lambda *a: np.zeros((2, 2)),
        kappa=lambda *a: 0.02,
    )
    conn = conn_spec.build()
    th1s = np.linspace(0.0, 2.0, p["n_side"])
    th2s = np.linspace(-0.5, 0.5, p["n_side"])
    coords, residuals = [], []
    for a in th1s:
        for b in th2s:
            res = residual_2d(drum, loads, conn, 0.0, float(a), float(b))
            coords.append([0.0, a, b])
            residuals.append(res.as_array())
    return CaseResult(
        [Check("hoop-stress residual", _worst(residuals), 1e-7)],
        [_residual_table("t,th1,th2", coords, residuals)],
    )


# ---------------------------------------------------------------------------
# residual checks: d3_cosserat


@_case(
    "momentless_hydrostatic", "residual_check", "d3_cosserat",
    "Space-filling medium with every moment field zero and a symmetric "
    "hydrostatic stress: the ten balance laws degenerate to the classical "
    "four plus six identities.",
    defaults={"n_side": 3, "half_width": 0.8, "rho0": 2.0},
)
def _momentless_hydrostatic(p, rng, conn_spec):
    rho0 = p["rho0"]
    g = conn_spec.g
    conn = conn_spec.build()

    def T(t, x):
        sigma = -rho0 * float(g @ np.asarray(x)) * np.eye(3)
        return assemble_cauchy_T(rho0, np.zeros(3), sigma)

    zero_v = lambda t, x: np.zeros(3)  # noqa: E731
    zero_m = lambda t, x: np.zeros((3, 3))  # noqa: E731
    state = Cosserat3DState(T=T, q=zero_v, l=zero_v, l_star=zero_m,
                            M_star=zero_m)
    side = np.linspace(-p["half_width"], p["half_width"], p["n_side"])
    coords, residuals = [], []
    for a in side:
        for b in side:
            for c in side:
                x = np.array([a, b, c])
                res = residual_3d_cosserat(state, conn, 0.0, x)
                coords.append(np.concatenate([[0.0], x]))
                residuals.append(res.as_array())
    return CaseResult(
        [Check("momentless degeneration residual", _worst(residuals), 1e-8)],
        [_residual_table("t,x1,x2,x3", coords, residuals)],
    )


# ---------------------------------------------------------------------------
# reductions


@_case(
    "disc_section_moments", "reduction", "d1",
    "Circular cross-section integrals: line density, rigid-spin moment of "
    "momentum, transport moments of a parabolic pipe profile, and the "
    "parity zeros of a centered section.",
    defaults={"radius": 0.4, "rho0": 2.5, "omega": 1.3, "v_max": 2.0},
)
def _disc_section(p, rng, conn_spec):
    R, rho0, w, v_max = p["radius"], p["rho0"], p["omega"], p["v_max"]
    cs = CrossSection.disc(R)
    Pi = projector_matrix(cs)
    n = cs.n
    area = np.pi * R * R

    def rigid_T(xb):
        x3 = cs.origin + xb[0] * cs.e1 + xb[1] * cs.e2
        return assemble_cauchy_T(rho0, w * np.cross(n, x3), np.zeros((3, 3)))

    def pipe_T(xb):
        vt = v_max * (1.0 - (xb[0] ** 2 + xb[1] ** 2) / (R * R))
        return assemble_cauchy_T(rho0, vt * n, np.zeros((3, 3)))

    M_rigid = reduce_3d_to_1d_T(rigid_T, Pi, cs)
    mom = reduce_3d_to_1d_J(rigid_T, Pi, cs)
    fm = reduce_3d_to_1d_force_mass(pipe_T, Pi, cs)

    rho_l_rel = abs(M_rigid[0, 0] - rho0 * area) / (rho0 * area)
    l_ref = rho0 * w * (np.pi * R ** 4 / 2.0) * n
    l_rel = float(np.max(np.abs(mom.l - l_ref))) / float(
        np.max(np.abs(l_ref)))
    # Parabolic profile: mean tangential speed v_max / 2 and transport
    # force F = -rho0 v_max^2 pi R^2 / 12 n from the velocity fluctuation.
    F_ref = -rho0 * v_max ** 2 * area / 12.0 * n
    F_err = float(np.max(np.abs(fm.F - F_ref)))
    vt_err = abs(fm.v_t - v_max / 2.0)
    parity = max(
        float(np.max(np.abs(mom.q))), float(np.max(np.abs(mom.l_star)))
    )
    rows = np.array([np.concatenate([
        [M_rigid[0, 0]], mom.l, fm.F, [fm.v_t],
    ])])
    table = Table("reduced", "rho_l,l1,l2,l3,F1,F2,F3,v_t", rows)
    checks = [
        Check("line density relative error", rho_l_rel, 1e-10),
        Check("rigid-spin moment relative error", l_rel, 1e-10),
        Check("pipe transport force error", F_err, 1e-9),
        Check("pipe mean tangential speed error", vt_err, 1e-10),
        Check("centered-section parity zeros", parity, 1e-9),
    ]
    return CaseResult(checks, [table])


@_case(
    "thickness_integrals", "reduction", "d2",
    "Through-thickness integrals of a plate: membrane force, shear, the "
    "h^3/12 bending moment of a linear stress, and the surface density.",
    defaults={"h": 0.3, "rho0": 1.7, "kappa0": 2.4},
)
def _thickness(p, rng, conn_spec):
    h, rho0, k0 = p["h"], p["rho0"], p["kappa0"]
    rule = ThicknessRule(h)
    sig_c = np.array([[1.2, 0.4, 0.7], [0.4, -0.8, 0.2], [0.7, 0.2, 0.5]])

    uniform = reduce_3d_to_2d(lambda z: sig_c, rho0, rule)
    bending = reduce_3d_to_2d(
        lambda z: np.array([[k0 * z, 0.0, 0.0],
                            [0.0, 0.0, 0.0],
                            [0.0, 0.0, 0.0]]),
        rho0, rule,
    )
    n_err = float(np.max(np.abs(uniform.N - h * sig_c[:2, :2])))
    q_err = float(np.max(np.abs(uniform.Q - h * sig_c[:2, 2])))
    m_err = abs(bending.M[0, 0] - k0 * h ** 3 / 12.0)
    rho_err = abs(uniform.rho_s - rho0 * h)
    rows = np.array([np.concatenate([
        uniform.N.ravel(), uniform.Q, bending.M.ravel(), [uniform.rho_s],
    ])])
    table = Table(
        "reduced", "N11,N12,N21,N22,Q1,Q2,M11,M12,M21,M22,rho_s", rows,
    )
    checks = [
        Check("membrane force error", n_err, 1e-12),
        Check("shear force error", q_err, 1e-12),
        Check("pure-bending moment error", m_err, 1e-12),
        Check("surface density error", rho_err, 1e-12),
    ]
    return CaseResult(checks, [table])


# ---------------------------------------------------------------------------
# convergence studies


def manufactured_rod(g=(0.1, -0.3, 0.2), Omega=(0.2, 0.1, -0.3)):
    """Smooth 1D fields on a static straight chart with the exact residual.

    Returns (field, conn, exact) with exact(t, s) the ten-component
    residual array; g and Omega are the uniform frame fields the expansion
    absorbs.  Verified against a symbolic derivation in the tests.
    """
    g = np.asarray(g, dtype=float).reshape(3)
    Om = np.asarray(Omega, dtype=float).reshape(3)
    conn = GalileanConnection(g=g, Omega=Om)
    e1 = np.array([1.0, 0.0, 0.0])

    def v(t, s):
        return np.array([
            0.2 * np.sin(s + t), 0.1 * np.cos(s), 0.1 * np.sin(2.0 * s),
        ])

    curve = Curve1D(
        psi=lambda t, s: np.array([s, 0.0, 0.0]),
        n=lambda t, s: e1,
        v=v,
    )

    def rho(t, s):
        return 1.5 + 0.4 * np.cos(s - t)

    def F(t, s):
        return np.array([
            0.3 * np.sin(s), 0.2 * np.cos(s + t), 0.1 * np.exp(s / 3.0),
        ])

    def l_fn(t, s):
        return np.array([
            0.1 * np.sin(s + t), 0.2 * np.cos(s), 0.1 * np.sin(s),
        ])

    def l_star(t, s):
        return np.array([
            0.2 * np.sin(s), 0.1 * np.cos(s - t), 0.2 * np.sin(s + t),
        ])

    f = Cosserat1DField(
        curve=curve,
        rho_l=rho,
        F=F,
        q=lambda t, s: np.array([
            0.2 * np.cos(s), 0.1 * np.sin(s + t), 0.3 * np.sin(s),
        ]),
        l=l_fn,
        l_star=l_star,
        M_star=lambda t, s: np.array([
            0.1 * np.cos(s + t), 0.3 * np.sin(s), 0.2 * np.cos(s),
        ]),
    )

    def exact(t, s):
        rho_v = rho(t, s)
        v_v = v(t, s)
        v_t = v_v[0]
        drho_dt = 0.4 * np.sin(s - t)
        drho_ds = -0.4 * np.sin(s - t)
        dvt_ds = 0.2 * np.cos(s + t)
        mass = drho_dt + drho_ds * v_t + rho_v * dvt_ds

        dv_dt = np.array([0.2 * np.cos(s + t), 0.0, 0.0])
        dv_ds = np.array([
            0.2 * np.cos(s + t), -0.1 * np.sin(s), 0.2 * np.cos(2.0 * s),
        ])
        dF_ds = np.array([
            0.3 * np.cos(s), -0.2 * np.sin(s + t),
            (0.1 / 3.0) * np.exp(s / 3.0),
        ])
        lin = rho_v * (dv_dt + v_t * dv_ds) - dF_ds \
            - rho_v * (g - 2.0 * np.cross(Om, v_v))

        dq_dt = np.array([0.0, 0.1 * np.cos(s + t), 0.0])
        dls_ds = np.array([
            0.2 * np.cos(s), -0.1 * np.sin(s - t), 0.2 * np.cos(s + t),
        ])
        pos = dq_dt + dls_ds - rho_v * v_v

        dl_dt = np.array([0.1 * np.cos(s + t), 0.0, 0.0])
        dMs_ds = np.array([
            -0.1 * np.sin(s + t), 0.3 * np.cos(s), -0.2 * np.sin(s),
        ])
        ang = dl_dt + np.cross(Om, l_fn(t, s)) \
            + np.cross(l_star(t, s), np.cross(Om, e1)) \
            + dMs_ds - np.cross(e1, F(t, s))
        return np.concatenate([[mass], lin, pos, ang])

    return f, conn, exact


@_case(
    "cauchy_convergence", "convergence", "d3_cauchy",
    "Step-refinement study of the classical-medium residual on "
    "manufactured sin/exp fields: observed order two.",
    defaults={"steps": [4e-3, 2e-3, 1e-3], "t": 0.4,
              "x": [0.3, -0.6, 0.5]},
)
def _cauchy_convergence(p, rng, conn_spec):
    medium, conn, exact = manufactured_cauchy(conn_spec.g, conn_spec.Omega)
    t = p["t"]
    x = _vec3_key(p["x"], "params.x")
    ref = exact(t, x)

    def op(fields, point, h):
        res = residual_cauchy(fields, conn, point[0], point[1], h=h)
        return float(np.max(np.abs(res.as_array() - ref)))

    hs = sorted((float(h) for h in p["steps"]), reverse=True)
    errs = [op(medium, (t, x), h) for h in hs]
    slope = convergence_check(op, medium, (t, x), hs)
    rows = np.array([[h, e] for h, e in zip(hs, errs)])
    checks = [Check("observed order minus two",
                    abs((slope if slope is not None else 2.0) - 2.0), 0.2)]
    return CaseResult(checks, [Table("convergence", "h,error", rows)])


@_case(
    "rod_convergence", "convergence", "d1",
    "Step-refinement study of the slender-medium residual on manufactured "
    "sin/exp fields: observed order two.",
    defaults={"steps": [4e-3, 2e-3, 1e-3], "t": 0.3, "s": 0.7},
)
def _rod_convergence(p, rng, conn_spec):
    f, conn, exact = manufactured_rod(conn_spec.g, conn_spec.Omega)
    t, s = p["t"], p["s"]
    ref = exact(t, s)

    def op(fields, point, h):
        res = residual_1d(fields, conn, point[0], point[1], h=h)
        return float(np.max(np.abs(res.as_array() - ref)))

    hs = sorted((float(h) for h in p["steps"]), reverse=True)
    errs = [op(f, (t, s), h) for h in hs]
    slope = convergence_check(op, f, (t, s), hs)
    rows = np.array([[h, e] for h, e in zip(hs, errs)])
    checks = [Check("observed order minus two",
                    abs((slope if slope is not None else 2.0) - 2.0), 0.2)]
    return CaseResult(checks, [Table("convergence", "h,error", rows)])
