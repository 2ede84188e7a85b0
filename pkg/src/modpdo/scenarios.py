"""Scenario registry: configuration, execution, and metric assembly.

Each scenario realizes one verification suite at desk scale and returns a
:class:`VerificationReport`.  Runs are deterministic functions of their
configuration: every random draw comes from the splittable generator
seeded by the config, and metric values reproduce to the last digit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, asdict

import numpy as np

from .algebra import cstar_norm, approximate_unit
from .deformation import (
    DeformationMatrix,
    approximate_identity,
    commutator_apply,
    deformed_product,
    deformed_product_direct,
    left_rep_apply,
    left_symbol,
    right_rep_apply,
)
from .errors import ConfigError, ConvergenceError
from .fourier import fourier
from .grids import GridSpec, ModuleFunction, SampledSymbol, module_inner, module_norm
from .heisenberg import (
    OperatorHandle,
    commutant_fingerprint,
    conjugate_operator,
    displaced_symbol,
    displacement_law_deviation,
)
from .quantize import (
    DEFAULT_EPS_SCHEDULE,
    adjoint_symbol,
    cv_ratio_trials,
    mixed_derivative_seminorm,
    operator_norm_estimate,
    phase_space_mass,
    quantize_apply,
    quantize_apply_direct,
    windowed_transform,
)
from .report import Metric, VerificationReport
from .rng import SplitMix
from .testfns import make_test_function, make_test_symbol

__all__ = ["ScenarioConfig", "SCENARIOS", "run_scenario", "default_config"]

SCHEMA_VERSION = 1

# Per-scenario grid and trial defaults, tuned so each suite passes its
# tolerances with margin and stays within its runtime budget.
_DEFAULTS = {
    "fourier-unitarity": dict(n=1, N=256, L=10.0, k=2, trial_count=50),
    "cv-bound": dict(n=1, N=256, L=10.0, k=2, trial_count=20),
    "windowed-transform": dict(n=1, N=512, L=16.0, k=2, trial_count=5),
    "adjoint-symbol": dict(n=1, N=256, L=10.0, k=2, trial_count=10),
    "operb-roundtrip": dict(n=1, N=512, L=8.0, k=2, trial_count=1),
    "deformed-product": dict(n=2, N=64, L=6.0, k=2, theta=0.5, trial_count=4),
    "approx-identity": dict(n=2, N=256, L=6.0, k=2, theta=0.5, trial_count=3),
    "heisenberg-conjugation": dict(n=1, N=256, L=10.0, k=2, trial_count=3),
    "heissmooth": dict(n=2, N=64, L=6.0, k=2, theta=0.5, trial_count=3),
    "commutant": dict(n=2, N=32, L=6.0, k=2, theta=0.5, trial_count=2),
}

_CONFIG_KEYS = {
    "schema_version", "scenario", "n", "N", "L", "k", "theta", "J", "seed",
    "trial_count", "tolerance_overrides", "epsilon_schedule", "output_path",
}


@dataclass
class ScenarioConfig:
    scenario: str
    n: int
    N: int
    L: float
    k: int
    seed: int = 0
    theta: float = 0.0
    J: list | None = None
    trial_count: int = 1
    tolerance_overrides: dict = field(default_factory=dict)
    epsilon_schedule: list = field(default_factory=lambda: list(DEFAULT_EPS_SCHEDULE))
    output_path: str | None = None
    use_oracle: bool = False

    @staticmethod
    def from_dict(raw: dict) -> "ScenarioConfig":
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        if raw.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {raw.get('schema_version')}")
        name = raw.get("scenario")
        if name not in _DEFAULTS:
            raise ConfigError(
                f"unknown scenario {name!r}; choose from {sorted(_DEFAULTS)}"
            )
        merged = dict(_DEFAULTS[name])
        for key in ("n", "N", "L", "k", "theta", "seed", "trial_count"):
            if key in raw:
                merged[key] = raw[key]
        cfg = ScenarioConfig(
            scenario=name,
            n=int(merged["n"]),
            N=int(merged["N"]),
            L=float(merged["L"]),
            k=int(merged["k"]),
            seed=int(merged.get("seed", 0)),
            theta=float(merged.get("theta", 0.0)),
            J=raw.get("J"),
            trial_count=int(merged.get("trial_count", 1)),
            tolerance_overrides=dict(raw.get("tolerance_overrides", {})),
            epsilon_schedule=list(raw.get("epsilon_schedule", DEFAULT_EPS_SCHEDULE)),
            output_path=raw.get("output_path"),
        )
        cfg.validate()
        return cfg

    def validate(self):
        try:
            self.grid()
        except Exception as exc:
            raise ConfigError(f"invalid grid parameters: {exc}") from exc
        if self.k < 1:
            raise ConfigError("algebra dimension k must be >= 1")
        if self.trial_count < 1:
            raise ConfigError("trial_count must be >= 1")
        try:
            self.deformation()
        except Exception as exc:
            raise ConfigError(f"invalid deformation matrix: {exc}") from exc
        for name, value in self.tolerance_overrides.items():
            if not isinstance(value, (int, float)) or value <= 0:
                raise ConfigError(f"tolerance override {name!r} must be a positive number")

    def grid(self) -> GridSpec:
        return GridSpec(self.n, self.L, self.N)

    def deformation(self) -> DeformationMatrix:
        if self.J is not None:
            return DeformationMatrix(self.J)
        if self.n == 2 and self.theta != 0.0:
            return DeformationMatrix.rotation(self.theta)
        return DeformationMatrix.zero(self.n)

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerance_overrides.get(name, default))

    def echo(self) -> dict:
        d = asdict(self)
        d["schema_version"] = SCHEMA_VERSION
        d["J"] = self.deformation().as_array().tolist()
        return d


def default_config(scenario: str, **overrides) -> ScenarioConfig:
    raw = {"scenario": scenario}
    raw.update(overrides)
    return ScenarioConfig.from_dict(raw)


class _Phases:
    """Wall-clock phase timings in milliseconds."""

    def __init__(self):
        self.timings = {}
        self._t0 = time.perf_counter()

    def mark(self, name: str):
        t1 = time.perf_counter()
        self.timings[name] = round(1000.0 * (t1 - self._t0), 3)
        self._t0 = t1


def _rel(dev: float, scale: float) -> float:
    return float(dev / max(scale, 1e-300))


# --------------------------------------------------------------------------
# scenarios


def _scenario_fourier_unitarity(cfg: ScenarioConfig) -> VerificationReport:
    grid = cfg.grid()
    phases = _Phases()
    report = VerificationReport("fourier-unitarity", cfg.echo())
    worst_inner = 0.0
    worst_norm = 0.0
    for t in range(cfg.trial_count):
        recipe_f = "gaussian" if t % 2 == 0 else "modulated-gaussian"
        f = make_test_function(recipe_f, grid, cfg.seed + 17 * t, dim=cfg.k)
        g = make_test_function("modulated-gaussian", grid, cfg.seed + 17 * t + 7, dim=cfg.k)
        fh, gh = fourier(f), fourier(g)
        lhs = module_inner(f, g)
        rhs = module_inner(fh, gh)
        nf, ng = module_norm(f), module_norm(g)
        worst_inner = max(worst_inner, cstar_norm(lhs - rhs) / (nf * ng + 1.0))
        worst_norm = max(worst_norm, abs(module_norm(fh) - nf) / nf)
        report.plot_rows.append((t, worst_inner, "unitarity_deviation"))
    phases.mark("trials")
    report.add(Metric.bounded("unitarity_deviation", worst_inner,
                              cfg.tol("unitarity_deviation", 1e-8)))
    report.add(Metric.bounded("norm_preservation", worst_norm,
                              cfg.tol("norm_preservation", 1e-8)))
    report.timings_ms = phases.timings
    return report


def _scenario_cv_bound(cfg: ScenarioConfig) -> VerificationReport:
    grid = cfg.grid()
    dual = grid.dual()
    phases = _Phases()
    report = VerificationReport("cv-bound", cfg.echo())
    l_config = cfg.tol("l_config", 1.5 * 2.0**cfg.n * np.pi**cfg.n)
    worst_op = 0.0
    worst_trial = 0.0
    scaling_dev = 0.0
    unconverged = 0
    for t in range(cfg.trial_count):
        a = make_test_symbol(grid, dual, cfg.seed + 101 * t, dim=cfg.k)
        pi_a = mixed_derivative_seminorm(a)
        est = operator_norm_estimate(a, seed=cfg.seed + t)
        if not est.converged:
            unconverged += 1
        worst_op = max(worst_op, est.estimate / pi_a)
        ratios = cv_ratio_trials(a, 3, cfg.seed + 7919 * t, dim=cfg.k)
        scaled = SampledSymbol(a.grid_x, a.grid_xi, 5.0 * a.values, a.localization)
        ratios5 = cv_ratio_trials(scaled, 3, cfg.seed + 7919 * t, dim=cfg.k)
        scaling_dev = max(scaling_dev, float(np.abs(ratios - ratios5).max()))
        worst_trial = max(worst_trial, float(ratios.max()))
        report.plot_rows.append((t, est.estimate / pi_a, "opnorm_ratio"))
    phases.mark("trials")
    report.add(Metric.bounded("opnorm_ratio", worst_op, l_config,
                              note="power-iteration estimate over seminorm"))
    report.add(Metric.bounded("trial_ratio", worst_trial, l_config,
                              note="||Op(a) phi|| / (pi(a) ||phi||) over trial functions"))
    report.add(Metric.bounded("scaling_invariance", scaling_dev,
                              cfg.tol("scaling_invariance", 1e-12),
                              note="ratio drift under a -> 5a"))
    report.add(Metric.bounded("unconverged_power_iterations", float(unconverged),
                              float(cfg.trial_count),
                              note="warning count; estimates stay valid lower bounds"))
    report.timings_ms = phases.timings
    return report


def _tail_mass(phi: ModuleFunction, nodes: int = 48) -> np.ndarray:
    """Exact x-tail of the windowed phase-space mass beyond the box.

    integral over |x| > L of sum_y phi(y)* phi(y) / (1 + (x - y)^2) h dx,
    mapped through u = 1/x and integrated by Gauss-Legendre.
    """
    grid = phi.grid
    xs = grid.axis()
    k = phi.k
    gram_y = np.einsum("yij,yik->yjk", np.conj(phi.values), phi.values) * grid.cell_volume
    glnodes, glweights = np.polynomial.legendre.leggauss(nodes)
    u = (glnodes + 1.0) / 2.0 * (1.0 / grid.half_width)
    wu = glweights / 2.0 * (1.0 / grid.half_width)
    tail = np.zeros((k, k), dtype=complex)
    for uu, ww in zip(u, wu):
        if uu <= 0.0:
            continue
        x = 1.0 / uu
        for sign in (1.0, -1.0):
            weight_y = 1.0 / (1.0 + (sign * x - xs) ** 2)
            tail += ww / uu**2 * np.einsum("y,yjk->jk", weight_y, gram_y)
    return tail


def _scenario_windowed_transform(cfg: ScenarioConfig) -> VerificationReport:
    grid = cfg.grid()
    phases = _Phases()
    report = VerificationReport("windowed-transform", cfg.echo())
    # independent oracle: per sample point, the window mass over the box is
    # the exact integral of 1/(1+z^2) over the shifted interval (y-L, y+L]
    ys = grid.axis()
    L = grid.half_width
    window_mass = np.arctan(L - ys) + np.arctan(L + ys)
    worst_full = 0.0
    worst_box = 0.0
    worst_bound = 0.0
    for t in range(cfg.trial_count):
        phi = make_test_function("gaussian" if t % 2 == 0 else "modulated-gaussian",
                                 grid, cfg.seed + 31 * t, dim=cfg.k)
        g = windowed_transform(phi)
        mass_box = phase_space_mass(g)
        gram = module_inner(phi, phi)
        full = mass_box + _tail_mass(phi)
        box_oracle = np.einsum("y,yij,yik->jk", window_mass, np.conj(phi.values),
                               phi.values) * grid.cell_volume
        dev_full = cstar_norm(full - np.pi * gram) / cstar_norm(np.pi * gram)
        dev_box = cstar_norm(mass_box - box_oracle) / cstar_norm(box_oracle)
        worst_full = max(worst_full, dev_full)
        worst_box = max(worst_box, dev_box)
        norm_g = float(np.sqrt(cstar_norm(mass_box)))
        worst_bound = max(worst_bound, norm_g / (np.pi ** (grid.n / 2.0) * module_norm(phi)))
        report.plot_rows.append((t, dev_full, "parseval_deviation"))
    phases.mark("trials")
    report.add(Metric.bounded("parseval_deviation", worst_full,
                              cfg.tol("parseval_deviation", 1e-4),
                              note="phase-space mass (box + exact tail) vs pi * <phi, phi>"))
    report.add(Metric.bounded("box_parseval_deviation", worst_box,
                              cfg.tol("box_parseval_deviation", 1e-4),
                              note="box mass vs independent quadrature of the window constant"))
    report.add(Metric.bounded("norm_bound", worst_bound, 1.0 + 1e-12,
                              note="||g|| / (pi^(n/2) ||phi||)"))
    report.timings_ms = phases.timings
    return report


def _scenario_adjoint_symbol(cfg: ScenarioConfig) -> VerificationReport:
    grid = cfg.grid()
    dual = grid.dual()
    phases = _Phases()
    report = VerificationReport("adjoint-symbol", cfg.echo())
    sched = list(cfg.epsilon_schedule)
    conv_tol = cfg.tol("extrapolation_convergence", 1e-4)

    # constant symbol: adjoint must be the involution
    rng = SplitMix(cfg.seed).derive("adjoint-const")
    const = np.array([[rng.complex_normal() for _ in range(cfg.k)] for _ in range(cfg.k)])
    const_vals = np.broadcast_to(const, grid.shape + dual.shape + (cfg.k, cfg.k)).copy()
    a_const = SampledSymbol(grid, dual, const_vals, localization="bounded")
    p_const = adjoint_symbol(a_const, sched, tolerance=conv_tol)
    target = np.conj(const).T
    const_dev = float(cstar_norm((p_const.values - target).reshape(-1, cfg.k, cfg.k)).max())
    const_dev /= cstar_norm(const)
    phases.mark("constant_symbol")

    qapply = quantize_apply_direct if cfg.use_oracle else quantize_apply
    worst_adj = 0.0
    worst_trace = 0.0
    for t in range(cfg.trial_count):
        a = make_test_symbol(grid, dual, cfg.seed + 211 * t, dim=cfg.k, localized=True)
        p = adjoint_symbol(a, sched, tolerance=conv_tol)
        worst_trace = max(worst_trace, p.eps_trace[-1])
        for i, diff in enumerate(p.eps_trace):
            report.plot_rows.append((sched[min(i + 1, len(sched) - 1)], diff,
                                     f"extrapolation_trace_{t}"))
        phi = make_test_function("gaussian", grid, cfg.seed + 211 * t + 3, dim=cfg.k)
        psi = make_test_function("modulated-gaussian", grid, cfg.seed + 211 * t + 5, dim=cfg.k)
        lhs = module_inner(qapply(a, phi), psi)
        rhs = module_inner(phi, qapply(p, psi))
        dev = cstar_norm(lhs - rhs) / (module_norm(phi) * module_norm(psi))
        worst_adj = max(worst_adj, dev)
    phases.mark("adjointness")

    report.add(Metric.bounded("constant_symbol_deviation", const_dev,
                              cfg.tol("constant_symbol_deviation", 1e-4)))
    report.add(Metric.bounded("adjointness_deviation", worst_adj,
                              cfg.tol("adjointness_deviation", 1e-4)))
    report.add(Metric.bounded("extrapolation_convergence", worst_trace, conv_tol,
                              note="last Richardson update across trials"))
    report.timings_ms = phases.timings
    return report


def _scenario_operb_roundtrip(cfg: ScenarioConfig) -> VerificationReport:
    # symmetric product grid: both symbol axes use the spatial spacing
    grid = cfg.grid()
    phases = _Phases()
    report = VerificationReport("operb-roundtrip", cfg.echo())
    from .quantize import lift_symbol, reconstruct_symbol

    mesh_x = grid.meshgrid()
    X = mesh_x[0]
    gauss = np.exp(-np.add.outer(X.ravel()**2, X.ravel()**2)).reshape(grid.shape + grid.shape)
    unit = np.eye(cfg.k, dtype=complex)
    a = SampledSymbol(grid, grid, gauss[..., None, None] * unit, localization="schwartz")
    b = lift_symbol(a)
    back = reconstruct_symbol(b)
    lo, hi = int(0.2 * grid.points), int(0.8 * grid.points)
    inner = (slice(lo, hi), slice(lo, hi))
    diff = cstar_norm((back.values - a.values)[inner].reshape(-1, cfg.k, cfg.k)).max()
    scale = cstar_norm(a.values.reshape(-1, cfg.k, cfg.k)).max()
    roundtrip = float(diff / scale)
    phases.mark("roundtrip")

    const_vals = np.broadcast_to(unit, grid.shape + grid.shape + (cfg.k, cfg.k)).copy()
    c_sym = SampledSymbol(grid, grid, const_vals, localization="bounded")
    c_back = reconstruct_symbol(c_sym)
    const_dev = float(cstar_norm((c_back.values - const_vals).reshape(-1, cfg.k, cfg.k)).max())
    phases.mark("constants")

    report.add(Metric.bounded("roundtrip_interior_error", roundtrip,
                              cfg.tol("roundtrip_interior_error", 1e-3),
                              note="relative sup error on the interior 60% region"))
    report.add(Metric.bounded("constant_reconstruction", const_dev,
                              cfg.tol("constant_reconstruction", 1e-4)))
    report.timings_ms = phases.timings
    return report


def _scenario_deformed_product(cfg: ScenarioConfig) -> VerificationReport:
    grid = cfg.grid()
    J = cfg.deformation()
    phases = _Phases()
    report = VerificationReport("deformed-product", cfg.echo())
    k = cfg.k
    F = make_test_function("gaussian", grid, cfg.seed + 1, dim=k)
    G = make_test_function("gaussian", grid, cfg.seed + 2, dim=k)
    H = make_test_function("modulated-gaussian", grid, cfg.seed + 3, dim=k)
    phi = make_test_function("gaussian", grid, cfg.seed + 4, dim=k)

    # (a) undeformed limit
    J0 = DeformationMatrix.zero(grid.n)
    prod0 = deformed_product(F, G, J0)
    pointwise = np.einsum("...ij,...jk->...ik", F.values, G.values)
    dev0 = _rel(cstar_norm((prod0.values - pointwise).reshape(-1, k, k)).max(),
                cstar_norm(pointwise.reshape(-1, k, k)).max())
    phases.mark("undeformed")

    # (b) brute-force oracle at probe points
    main = deformed_product(F, G, J)
    ax = grid.axis()
    n_probe = 6 if cfg.use_oracle else 4
    idx = np.linspace(grid.points // 4, 3 * grid.points // 4, n_probe, dtype=int)
    probes = np.array([(ax[i], ax[j]) for i in idx for j in idx])
    oracle = deformed_product_direct(F, G, J, probes)
    main_at = np.array([main.values[i, j] for i in idx for j in idx])
    scale = cstar_norm(main.values.reshape(-1, k, k)).max()
    dev_oracle = _rel(cstar_norm(main_at - oracle).max(), scale)
    phases.mark("oracle")

    # (c) associativity
    FG = deformed_product(F, G, J)
    GH = deformed_product(G, H, J)
    left = deformed_product(FG, H, J)
    right = deformed_product(F, GH, J)
    dev_assoc = _rel(cstar_norm((left.values - right.values).reshape(-1, k, k)).max(),
                     cstar_norm(left.values.reshape(-1, k, k)).max())
    phases.mark("associativity")

    # (d) left/right representations commute
    comm = commutator_apply(F, G, phi, J)
    dev_comm = _rel(module_norm(comm), module_norm(phi))
    phases.mark("commutation")

    report.add(Metric.bounded("undeformed_pointwise", dev0, cfg.tol("undeformed_pointwise", 1e-8)))
    report.add(Metric.bounded("oracle_agreement", dev_oracle, cfg.tol("oracle_agreement", 1e-4)))
    report.add(Metric.bounded("associativity", dev_assoc, cfg.tol("associativity", 1e-4)))
    report.add(Metric.bounded("left_right_commutation", dev_comm,
                              cfg.tol("left_right_commutation", 1e-4)))
    report.timings_ms = phases.timings
    return report


def _scenario_approx_identity(cfg: ScenarioConfig) -> VerificationReport:
    grid = cfg.grid()
    J = cfg.deformation()
    phases = _Phases()
    report = VerificationReport("approx-identity", cfg.echo())
    phi = make_test_function("gaussian", grid, cfg.seed + 11, dim=cfg.k)
    nphi = module_norm(phi)
    unit = approximate_unit(1, cfg.k)
    errors = []
    norm_dev = 0.0
    for k_index in (1, 2, 4):
        e_k = approximate_identity(k_index, grid, dim=cfg.k)
        freqs, coeffs = e_k.spectrum
        total = coeffs.sum(axis=0)
        norm_dev = max(norm_dev, float(cstar_norm(total - unit)))
        image = deformed_product(e_k, phi, J)
        err = module_norm(image.with_values(image.values - phi.values)) / nphi
        errors.append(err)
        report.plot_rows.append((k_index, err, "approx_identity_error"))
    phases.mark("members")
    decreasing = all(errors[i + 1] < errors[i] for i in range(len(errors) - 1))
    report.add(Metric.bounded("bump_normalization", norm_dev, cfg.tol("bump_normalization", 1e-10)))
    report.add(Metric("strictly_decreasing", float(not decreasing), 0.5, decreasing, "<=",
                      "0 when the error sequence strictly decreases"))
    report.add(Metric.bounded("final_error", errors[-1], cfg.tol("final_error", 0.1)))
    report.timings_ms = phases.timings
    return report


def _scenario_heisenberg_conjugation(cfg: ScenarioConfig) -> VerificationReport:
    grid = cfg.grid()
    dual = grid.dual()
    phases = _Phases()
    report = VerificationReport("heisenberg-conjugation", cfg.echo())
    a = make_test_symbol(grid, dual, cfg.seed + 5, dim=cfg.k, localized=True)
    qapply = quantize_apply_direct if cfg.use_oracle else quantize_apply
    T = OperatorHandle("from_symbol", lambda f: qapply(a, f), {"symbol": a})
    h = grid.spacing
    dxi = np.pi / grid.half_width
    samples = [(np.array([4 * h]), np.array([2 * dxi])),
               (np.array([-6 * h]), np.array([3 * dxi])),
               (np.array([10 * h]), np.array([-4 * dxi]))][: cfg.trial_count]
    phi = make_test_function("gaussian", grid, cfg.seed + 23, dim=cfg.k)
    nphi = module_norm(phi)

    ident = conjugate_operator(T, np.zeros(1), np.zeros(1)).apply(phi)
    base = T.apply(phi)
    dev_ident = module_norm(ident.with_values(ident.values - base.values)) / nphi

    dev_t = 0.0
    dev_cov = 0.0
    for z, zeta in samples:
        c0 = conjugate_operator(T, z, zeta, t=0.0).apply(phi)
        c1 = conjugate_operator(T, z, zeta, t=1.3).apply(phi)
        dev_t = max(dev_t, module_norm(c0.with_values(c0.values - c1.values)) / nphi)
        shifted = displaced_symbol(a, z, zeta)
        direct = qapply(shifted, phi)
        dev_cov = max(dev_cov, module_norm(c0.with_values(c0.values - direct.values)) / nphi)
    phases.mark("samples")

    report.add(Metric.bounded("identity_conjugation", dev_ident,
                              cfg.tol("identity_conjugation", 1e-12)))
    report.add(Metric.bounded("t_independence", dev_t, cfg.tol("t_independence", 1e-10)))
    report.add(Metric.bounded("symbol_covariance", dev_cov, cfg.tol("symbol_covariance", 1e-5)))
    report.timings_ms = phases.timings
    return report


def _scenario_heissmooth(cfg: ScenarioConfig) -> VerificationReport:
    grid = cfg.grid()
    J = cfg.deformation()
    phases = _Phases()
    report = VerificationReport("heissmooth", cfg.echo())
    F = make_test_function("gaussian", grid, cfg.seed + 41, dim=cfg.k)
    phi = make_test_function("gaussian", grid, cfg.seed + 43, dim=cfg.k)
    h = grid.spacing
    samples = [(np.array([2 * h, -3 * h]), np.array([0.7, 0.4])),
               (np.array([4 * h, 0.0]), np.array([-0.5, 0.8])),
               (np.array([-3 * h, 5 * h]), np.array([0.3, -0.6])),
               (np.array([0.0, 0.0]), np.array([1.1, 0.2])),
               (np.array([6 * h, 2 * h]), np.array([0.0, 0.0]))]
    lf_handle = OperatorHandle.left_rep(F, J)

    def builder(z, zeta):
        return conjugate_operator(lf_handle, z, zeta, interpolate=True)

    dev_lf = displacement_law_deviation(builder, J, samples, [phi])
    phases.mark("left_rep")

    # counterexample: x-only symbol on a coarser grid (full symbol path)
    cgrid = GridSpec(grid.n, grid.half_width, min(grid.points, 32))
    cdual = cgrid.dual()
    mesh = cgrid.meshgrid()
    profile = np.exp(-sum(m**2 for m in mesh) / 3.0) * (1.0 + 0.5 * mesh[0])
    unit = np.eye(cfg.k, dtype=complex)
    vals = np.broadcast_to(
        profile.reshape(cgrid.shape + (1,) * cgrid.n + (1, 1)) * unit,
        cgrid.shape + cdual.shape + (cfg.k, cfg.k),
    ).copy()
    a_x = SampledSymbol(cgrid, cdual, vals, localization="bounded")
    counter_handle = OperatorHandle.from_symbol(a_x)
    cphi = make_test_function("gaussian", cgrid, cfg.seed + 43, dim=cfg.k)

    def cbuilder(z, zeta):
        return conjugate_operator(counter_handle, z, zeta, interpolate=True)

    ch = cgrid.spacing
    csamples = [(np.array([2 * ch, -3 * ch]), np.array([0.7, 0.4]))]
    dev_counter = displacement_law_deviation(cbuilder, J, csamples, [cphi])
    phases.mark("counterexample")

    report.add(Metric.bounded("left_rep_displacement", dev_lf,
                              cfg.tol("left_rep_displacement", 1e-4)))
    report.add(Metric.exceeds("counterexample_displacement", dev_counter,
                              cfg.tol("counterexample_displacement", 1e-2),
                              note="x-only symbol must visibly violate the law"))
    report.timings_ms = phases.timings
    return report


def _scenario_commutant(cfg: ScenarioConfig) -> VerificationReport:
    grid = cfg.grid()
    J = cfg.deformation()
    phases = _Phases()
    report = VerificationReport("commutant", cfg.echo())
    F = make_test_function("gaussian", grid, cfg.seed + 61, dim=cfg.k)
    a_lf = left_symbol(F, J)
    G_suite = [make_test_function("gaussian", grid, cfg.seed + 67 + j, dim=cfg.k)
               for j in range(cfg.trial_count)]
    phi_suite = [make_test_function("gaussian", grid, cfg.seed + 71 + j, dim=cfg.k)
                 for j in range(cfg.trial_count)]
    qapply = quantize_apply_direct if cfg.use_oracle else quantize_apply
    result = commutant_fingerprint(a_lf, J, G_suite, phi_suite, apply_fn=qapply)
    phases.mark("left_symbol")

    # counterexample: symbol depending on x alone does not commute with R_G
    mesh = grid.meshgrid()
    dual = grid.dual()
    profile = np.exp(-sum(m**2 for m in mesh) / 3.0) * (1.0 + 0.5 * mesh[0])
    unit = np.eye(cfg.k, dtype=complex)
    vals = np.broadcast_to(
        profile.reshape(grid.shape + (1,) * grid.n + (1, 1)) * unit,
        grid.shape + dual.shape + (cfg.k, cfg.k),
    ).copy()
    a_x = SampledSymbol(grid, dual, vals, localization="bounded")
    counter = commutant_fingerprint(a_x, J, G_suite[:1], phi_suite[:1], apply_fn=qapply)
    phases.mark("counterexample")

    report.add(Metric.bounded("commutation", result["commutation"],
                              cfg.tol("commutation", 1e-4)))
    report.add(Metric.bounded("symbol_deviation", result["symbol_deviation"],
                              cfg.tol("symbol_deviation", 1e-6)))
    report.add(Metric.bounded("extraction_deviation", result["extraction_deviation"],
                              cfg.tol("extraction_deviation", 1e-3)))
    report.add(Metric.exceeds("counterexample_commutation", counter["commutation"],
                              cfg.tol("counterexample_commutation", 1e-2)))
    report.timings_ms = phases.timings
    return report


SCENARIOS = {
    "fourier-unitarity": _scenario_fourier_unitarity,
    "cv-bound": _scenario_cv_bound,
    "windowed-transform": _scenario_windowed_transform,
    "adjoint-symbol": _scenario_adjoint_symbol,
    "operb-roundtrip": _scenario_operb_roundtrip,
    "deformed-product": _scenario_deformed_product,
    "approx-identity": _scenario_approx_identity,
    "heisenberg-conjugation": _scenario_heisenberg_conjugation,
    "heissmooth": _scenario_heissmooth,
    "commutant": _scenario_commutant,
}


def run_scenario(config: ScenarioConfig) -> VerificationReport:
    """Execute one scenario; convergence failures become failed metrics."""
    if config.scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {config.scenario!r}")
    try:
        return SCENARIOS[config.scenario](config)
    except ConvergenceError as exc:
        report = VerificationReport(config.scenario, config.echo(), error_class="convergence")
        report.add(Metric("convergence", float("inf"), 0.0, False, "<=",
                          f"{exc} | trace: {exc.eps_trace}"))
        return report
