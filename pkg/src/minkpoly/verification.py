"""Property-verification suites behind ``minkpoly verify``.

Each check returns a :class:`PropertyResult`.  ``worst`` is the observed
statistic (largest error, or smallest slack for inequality checks) and
``margin`` its distance to the tolerance: a property passes iff margin >= 0.

Sample counts scale with the ``samples`` argument:

* algebra: ``samples`` random vector tuples (group checks use min(samples, 2000));
* flows: samples // 25 polygons per signature, at least 4;
* gt: samples // 10 lifted polygons per signature, samples // 2 orbits per
  signature for interlacing, ``samples`` secular updates, 100 * samples
  Rayleigh probes spread over a few orbits;
* polytope: min(samples, 100) random specs plus fixed examples.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import bending, mink3, polygon as pg, pseudo_gt as gt
from .errors import DegenerateDihedral, OutsidePolytope
from .polytope import build_polytope, contains, is_bounded, lattice_points
from .seeding import task_rng

SUITES = ("algebra", "flows", "gt", "polytope")

# the four signatures exercised throughout
SPECS = (
    pg.PolygonSpec(2, 2, (0.5, 0.5, 0.5, 0.5)),
    pg.PolygonSpec(3, 1, (0.2, 0.2, 0.2, 1.4)),
    pg.PolygonSpec(3, 2, (0.3, 0.4, 0.5, 0.6, 0.7)).normalized(),
    pg.PolygonSpec(4, 2, (0.2, 0.3, 0.25, 0.35, 0.4, 0.5)).normalized(),
)
DMAX = 3.0


@dataclass
class PropertyResult:
    suite: str
    name: str
    worst: float
    tol: float
    samples: int
    kind: str = "error"  # "error": worst <= tol;  "margin": worst >= -tol
    detail: str = ""

    @property
    def margin(self) -> float:
        if self.kind == "error":
            return self.tol - self.worst
        return self.worst + self.tol

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.worst) and self.margin >= 0) or (
            self.kind == "margin" and self.worst == np.inf
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["margin"] = self.margin
        d["passed"] = self.passed
        return d

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        cmp = "<=" if self.kind == "error" else ">= -"
        return (
            f"[{status}] {self.suite:8s} {self.name:44s} worst={self.worst:.3e} "
            f"({cmp}{self.tol:.0e})  n={self.samples}"
            + (f"  {self.detail}" if self.detail else "")
        )


@dataclass
class Report:
    seed: int
    samples: int
    results: list[PropertyResult] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "passed": self.passed,
            "seconds": self.seconds,
            "results": [r.to_dict() for r in self.results],
        }


def _tol(overrides: dict, name: str, default: float) -> float:
    return float(overrides.get(name, default))


# --- algebra ------------------------------------------------------------------


def suite_algebra(samples: int, seed: int, tols: dict) -> list[PropertyResult]:
    rng = task_rng(seed, 0)
    N = samples
    a, b, c, d = rng.normal(size=(4, N, 3))
    dot, cross, det = mink3.dot, mink3.cross, mink3.det3
    out = []

    def err(name, value, default=1e-12):
        out.append(PropertyResult("algebra", name, float(np.max(np.abs(value))), _tol(tols, name, default), N))

    err("antisymmetry", cross(a, b) + cross(b, a), 0.0)
    err("jacobi", cross(cross(a, b), c) + cross(cross(b, c), a) + cross(cross(c, a), b))
    err("bac_cab", cross(a, cross(b, c)) - (b * dot(a, c)[:, None] - c * dot(a, b)[:, None]))
    err("scalar_triple", dot(a, cross(b, c)) - det(a, b, c))
    err(
        "quadruple",
        cross(cross(a, b), cross(c, d))
        - (det(a, b, d)[:, None] * c - det(a, b, c)[:, None] * d),
    )
    A, B = mink3.to_su11(a), mink3.to_su11(b)
    err("lie_morphism", mink3.to_su11(cross(a, b)) - (A @ B - B @ A))
    err("trace_pairing", dot(a, b) + 2.0 * np.trace(A @ B, axis1=-2, axis2=-1).real)
    err("su11_roundtrip", mink3.from_su11(A) - a)

    M = min(N, 2000)
    worst_eq = worst_iso = worst_det = worst_boost = 0.0
    for i in range(M):
        g = mink3.random_su11(rng, rho_max=5.0)
        worst_det = max(worst_det, abs(g.pseudo_det - 1.0))
        ga, gb = mink3.ad_action(g, a[i]), mink3.ad_action(g, b[i])
        worst_eq = max(worst_eq, float(np.max(np.abs(mink3.ad_action(g, cross(a[i], b[i])) - cross(ga, gb)))))
        worst_iso = max(worst_iso, abs(float(dot(ga, gb) - dot(a[i], b[i]))) / max(1.0, float(np.abs(ga).max() * np.abs(gb).max())))
        v = mink3.ad_action(g, np.array([0.0, 0.0, 1.0 + abs(c[i, 0])]))
        h = mink3.boost_to_t_axis(v)
        target = np.array([0.0, 0.0, 1.0 + abs(c[i, 0])])
        worst_boost = max(worst_boost, float(np.max(np.abs(mink3.ad_action(h, v) - target))) / max(1.0, float(np.abs(v).max())))
    out += [
        PropertyResult("algebra", "equivariance (rho<=5)", worst_eq, _tol(tols, "equivariance", 1e-10), M),
        PropertyResult("algebra", "isometry (relative)", worst_iso, _tol(tols, "isometry", 1e-12), M),
        PropertyResult("algebra", "su11_pseudo_det", worst_det, _tol(tols, "su11_pseudo_det", 1e-12), M),
        PropertyResult("algebra", "boost_to_t_axis (relative)", worst_boost, _tol(tols, "boost_to_t_axis", 1e-12), M),
    ]
    return out


# --- flows --------------------------------------------------------------------


def sample_corpus(per_spec: int, seed: int, offset: int = 0, degauge: bool = True):
    """``per_spec`` sampled polygons for each signature in SPECS."""
    out = []
    for si, spec in enumerate(SPECS):
        for k in range(per_spec):
            rng = task_rng(seed, offset + 100_000 * si + k)
            out.append(pg.sample_polygon(spec, DMAX, rng, degauge=degauge))
    return out


def _angle_diff(a, b):
    return np.abs(pg.wrap_angle(np.asarray(a) - np.asarray(b)))


def suite_flows(samples: int, seed: int, tols: dict) -> list[PropertyResult]:
    per = max(4, samples // 25)
    polys = sample_corpus(per, seed, offset=1)
    rng = task_rng(seed, 2)
    res_closure = cone_margin = poly_margin = inv_err = rt_err = 0.0
    period_err = conserve_err = others_err = lin_resid = 0.0
    br_an = br_fd = 0.0
    skipped = 0
    for P in polys:
        s = pg.partial_sums(P)
        res_closure = max(res_closure, float(np.max(np.abs(pg.closure_residual(P.edges)))))
        for row in s[:-1]:
            kind, _ = mink3.classify(row)
            if kind is not mink3.Cone.TIMELIKE_FUTURE:
                cone_margin = np.inf
        d = pg.diagonals(P)
        if not contains(P.spec.polytope(), d[2 : P.n - 1]):
            poly_margin = np.inf
        try:
            aa = pg.action_angle(P)
        except DegenerateDihedral:
            skipped += 1
            continue
        # boost from the gauge-fixed frame: rounding in the chart grows like
        # the square of the overall boost, so stacking g on top of the
        # sampler's own random frame would measure conditioning, not invariance
        P0 = pg.gauge_fix(P, 2)
        g = mink3.random_su11(rng, rho_max=3.0)
        bb = pg.action_angle(pg.Polygon(P.spec, mink3.ad_action(g, P0.edges)))
        inv_err = max(inv_err, float(np.max(np.abs(aa.d - bb.d), initial=0)), float(np.max(_angle_diff(aa.phi, bb.phi), initial=0)))
        Q = pg.reconstruct(P.spec, aa)
        rt_err = max(rt_err, float(np.max(np.abs(pg.gauge_fix(P, 2).edges - pg.gauge_fix(Q, 2).edges))))
        for l in range(2, P.n - 1):
            T = 2.0 * np.pi / d[l]
            F = bending.flow_exact(P, l, T)
            period_err = max(period_err, float(np.max(np.abs(pg.gauge_fix(F, l).edges - pg.gauge_fix(P, l).edges))))
            times = np.linspace(0.0, T, 50, endpoint=False)[1:]
            shifts = []
            for t in times:
                G = bending.flow_exact(P, l, t)
                cc = pg.action_angle(G)
                dG = pg.diagonals(G)
                conserve_err = max(conserve_err, float(np.max(np.abs(dG - d))),
                                   float(np.max(np.abs(mink3.norm(G.edges) - np.asarray(P.spec.r)))))
                mask = np.arange(2, P.n - 1) != l
                others_err = max(others_err, float(np.max(_angle_diff(cc.phi[mask], aa.phi[mask]), initial=0)))
                shifts.append(cc.phi[l - 2] - aa.phi[l - 2])
            resid = pg.wrap_angle(np.array(shifts) - d[l] * times)
            lin_resid = max(lin_resid, float(np.max(np.abs(resid))))
        for i in range(2, P.n - 1):
            for j in range(2, P.n - 1):
                if i != j:
                    br_an = max(br_an, abs(bending.poisson_bracket(P, i, j)))
                    br_fd = max(br_fd, abs(bending.poisson_bracket(P, i, j, "fd")))
    N = len(polys)
    out = [
        PropertyResult("flows", "closure residual", res_closure, _tol(tols, "closure", 1e-9), N),
        PropertyResult("flows", "partial sums future timelike", cone_margin, 0.0, N),
        PropertyResult("flows", "diagonals inside polytope", poly_margin, 0.0, N),
        PropertyResult("flows", "action-angle SU(1,1) invariance", inv_err, _tol(tols, "invariance", 1e-9), N - skipped),
        PropertyResult("flows", "round trip (gauge-pinned)", rt_err, _tol(tols, "round_trip", 1e-8), N - skipped),
        PropertyResult("flows", "periodicity 2pi/d", period_err, _tol(tols, "periodicity", 1e-9), N - skipped),
        PropertyResult("flows", "conservation of r and d", conserve_err, _tol(tols, "conservation", 1e-9), N - skipped),
        PropertyResult("flows", "angle law: phi_l linear at rate d_l", lin_resid, _tol(tols, "angle_linear", 1e-7), N - skipped),
        PropertyResult("flows", "angle law: other phi fixed", others_err, _tol(tols, "angle_fixed", 1e-9), N - skipped),
        PropertyResult("flows", "involution (analytic)", br_an, _tol(tols, "involution", 1e-6), N - skipped),
        PropertyResult("flows", "involution (finite differences)", br_fd, _tol(tols, "involution", 1e-6), N - skipped),
    ]
    out += _numeric_flow_checks(polys[:: max(1, len(polys) // 4)][:4], tols)
    return out


def step_halving_ratio(P, l: int, time: float, floor: float = 3e-11, start: int = 100) -> float:
    """e(N) / e(2N) for flow_numeric against flow_exact at the finest N with e(2N) > floor.

    Measured in the gauge of ``gauge_fix(P, l)``: RK4 and the reprojection
    commute with SU(1,1), so the discretisation error is the same, but the
    rounding floor is set by the (small) gauge-fixed coordinates.
    """
    Q = pg.gauge_fix(P, l)
    E = bending.flow_exact(Q, l, time).edges

    def err(N):
        return float(np.max(np.abs(bending.flow_numeric(Q, l, time, N).edges - E)))

    N, e1 = start, err(start)
    e2 = err(2 * N)
    while True:
        e4 = err(4 * N)
        if e4 <= floor or N >= 6400:
            return e1 / e2
        N, e1, e2 = 2 * N, e2, e4


def _numeric_flow_checks(polys, tols) -> list[PropertyResult]:
    worst = 0.0
    ratios = []
    for P in polys:
        d = pg.diagonals(P)
        T = 2.0 * np.pi / d[2]
        E = bending.flow_exact(P, 2, T)
        worst = max(worst, float(np.max(np.abs(bending.flow_numeric(P, 2, T, 10_000).edges - E.edges))))
        ratios.append(step_halving_ratio(P, 2, T))
    lo, hi = min(ratios), max(ratios)
    rmin, rmax = 12.0, 20.0
    ratio_slack = min(lo - rmin, rmax - hi)
    return [
        PropertyResult("flows", "RK4 vs exact (10^4 steps)", worst, _tol(tols, "flow_numeric", 1e-6), len(polys)),
        PropertyResult("flows", "RK4 step-halving ratio in [12,20]", ratio_slack, 0.0, len(polys), "margin",
                       f"ratios {lo:.2f}..{hi:.2f}"),
    ]


# --- gt -----------------------------------------------------------------------


def random_admissible(p: int, q: int, rng) -> gt.OrbitSpectrum:
    mu = np.sort(rng.uniform(-2.0, 0.5, size=q))
    lam = np.sort(rng.uniform(mu[-1] + 0.05, mu[-1] + 3.0, size=p))
    return gt.OrbitSpectrum(tuple(lam), tuple(mu))


def suite_gt(samples: int, seed: int, tols: dict) -> list[PropertyResult]:
    out = []
    per = max(4, samples // 10)
    polys = sample_corpus(per, seed, offset=3)
    rng = task_rng(seed, 4)
    e_d = e_tr = 0.0
    pat = np.inf
    spec_err = 0.0
    for P in polys:
        mp = gt.lift_polygon(P, rng)
        G = gt.gt_variables(mp)
        d = pg.diagonals(P)
        e_d = max(e_d, float(np.max(np.abs(G.d - d[1:]))))
        e_tr = max(e_tr, float(np.max(np.abs(G.trace_partial - np.cumsum(P.spec.r)))))
        pat = min(pat, min(gt.minimal_pattern_margins(G, P.spec.p).values()))
        E = gt.eta(mp)
        for l in range(1, P.n + 1):
            full = np.linalg.eigvals(E[:l, :l])
            small = np.linalg.eigvals(gt.nu_trunc(mp, l))
            nz = full[np.abs(full) > 1e-6]
            # nu carries an extra zero when l = 1
            spec_err = max(spec_err, max(np.min(np.abs(np.append(full, 0.0) - s)) for s in small))
            if nz.size:
                spec_err = max(spec_err, max(np.min(np.abs(small - x)) for x in nz))
    N = len(polys)
    out += [
        PropertyResult("gt", "delta-gamma = diagonal length", e_d, _tol(tols, "gt_d", 1e-9), N),
        PropertyResult("gt", "gamma+delta = partial perimeter", e_tr, _tol(tols, "gt_trace", 1e-9), N),
        PropertyResult("gt", "minimal-orbit GT pattern", pat, _tol(tols, "gt_pattern", 1e-9), N, "margin"),
        PropertyResult("gt", "nu vs eta truncation spectra", spec_err, _tol(tols, "nu_eta", 1e-8), N),
    ]
    out += _interlacing(max(10, samples // 2), seed, tols)
    out += _secular(samples, seed, tols)
    out += _rayleigh(max(1000, 100 * samples), seed, tols)
    return out


def _interlacing(count: int, seed: int, tols) -> list[PropertyResult]:
    worst_im = 0.0
    worst_margin = np.inf
    total = 0
    for si, (p, q) in enumerate(((2, 1), (2, 2), (3, 1), (3, 2))):
        for k in range(count):
            rng = task_rng(seed, 5_000_000 + 100_000 * si + k)
            S = random_admissible(p, q, rng)
            A = gt.orbit_matrix(S, gt.random_upq(p, q, rng))
            ch = gt.truncation_spectrum(A, p + q - 1, gt.signature(p, q))
            worst_im = max(worst_im, float(np.max(np.abs(ch.imag) / (1.0 + np.abs(ch.real)))))
            worst_margin = min(worst_margin, gt.interlacing_check(S, ch.real).worst_margin)
            total += 1
    return [
        PropertyResult("gt", "truncation spectra real", worst_im, _tol(tols, "real_spectrum", 1e-8), total),
        PropertyResult("gt", "interlacing margins", worst_margin, _tol(tols, "interlacing", 1e-9), total, "margin"),
    ]


def random_secular(rng, sign: float) -> gt.SecularUpdate:
    """gamma < 0 < delta, |alpha|^2 - |beta|^2 = 1, r of the given sign."""
    gamma = -rng.uniform(0.05, 2.0)
    delta = rng.uniform(0.05, 2.0)
    b = abs(rng.normal()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    a = np.sqrt(1.0 + abs(b) ** 2) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return gt.SecularUpdate(delta, gamma, complex(a), complex(b), sign * rng.uniform(0.01, 3.0))


def _secular(count: int, seed: int, tols) -> list[PropertyResult]:
    rng = task_rng(seed, 6)
    bad_pos = bad_neg = 0
    n_neg = 0
    eig_err = 0.0
    for k in range(count):
        for sign in (1.0, -1.0):
            su = random_secular(rng, sign)
            R = gt.secular_roots(su)
            if sign > 0 and R.placement != "outer":
                bad_pos += 1
            if sign < 0 and su.condition <= 0:
                n_neg += 1
                bad_neg += R.placement != "inner"
            if R.placement != "complex":
                ev = np.sort(np.linalg.eigvals(gt.secular_matrix(su)).real)
                eig_err = max(eig_err, float(np.max(np.abs(ev - np.sort([R.root1.real, R.root2.real])))))
    return [
        PropertyResult("gt", "secular r>0 roots outside [gamma,delta]", float(bad_pos), 0.0, count),
        PropertyResult("gt", "secular r<0 roots inside (gamma,delta)", float(bad_neg), 0.0, n_neg),
        PropertyResult("gt", "secular roots = 2x2 eigenvalues", eig_err, _tol(tols, "secular_eig", 1e-10), count),
    ]


def _rayleigh(probes: int, seed: int, tols) -> list[PropertyResult]:
    lo_margin = hi_margin = np.inf
    eig_err = 0.0
    orbits = 0
    for si, (p, q) in enumerate(((2, 1), (2, 2), (3, 2), (4, 2))):
        rng = task_rng(seed, 7_000_000 + si)
        S = random_admissible(p, q, rng)
        g = gt.random_upq(p, q, rng)
        A = gt.orbit_matrix(S, g)
        J = gt.signature(p, q)
        X = rng.normal(size=(probes // 4, p + q)) + 1j * rng.normal(size=(probes // 4, p + q))
        vals, sgn = gt.rayleigh_batch(A, X, J)
        lo_margin = min(lo_margin, float(np.min(vals[sgn > 0]) - S.lam[0]))
        hi_margin = min(hi_margin, float(S.mu[-1] - np.max(vals[sgn < 0])))
        for i, lam in enumerate(S.diagonal):
            eig_err = max(eig_err, abs(gt.rayleigh(A, g[:, i], J) - lam))
        orbits += 1
    return [
        PropertyResult("gt", "Rayleigh min over timelike >= lambda_1", lo_margin, _tol(tols, "rayleigh", 1e-9), probes, "margin"),
        PropertyResult("gt", "Rayleigh max over spacelike <= mu_q", hi_margin, _tol(tols, "rayleigh", 1e-9), probes, "margin"),
        PropertyResult("gt", "Rayleigh equality at eigenvectors", eig_err, _tol(tols, "rayleigh_eig", 1e-12), orbits),
    ]


# --- polytope -----------------------------------------------------------------


def random_feasible_spec(rng) -> pg.PolygonSpec:
    p = int(rng.integers(1, 5)) + 1
    q = int(rng.integers(1, p + 1))
    n = p + q
    r = rng.uniform(0.1, 1.0, size=n)
    if q == 1:
        r[-1] = r[:-1].sum() + rng.uniform(0.05, 1.0)
    return pg.PolygonSpec(p, q, tuple(r))


def suite_polytope(samples: int, seed: int, tols: dict) -> list[PropertyResult]:
    rng = task_rng(seed, 8)
    count = min(samples, 100)
    wrong = 0
    for _ in range(count):
        spec = random_feasible_spec(rng)
        pp = build_polytope(spec.p, spec.q, spec.r)
        wrong += is_bounded(pp) != (spec.q == 1)
    out = [PropertyResult("polytope", "bounded iff q == 1", float(wrong), 0.0, count)]

    werr = 0.0
    inside = True
    pp = build_polytope(2, 2, (0.5,) * 4)
    for k in range(11):
        d2 = pg.diagonals(pg.witness(k))[2]
        werr = max(werr, abs(d2 - np.sqrt(0.5 + np.sqrt(k * k + 0.25))))
        inside &= contains(pp, [d2])
    out.append(PropertyResult("polytope", "witness d2 = sqrt(1/2+sqrt(k^2+1/4))", werr, _tol(tols, "witness", 1e-12), 11))
    out.append(PropertyResult("polytope", "witness inside polytope", 0.0 if inside else np.inf, 0.0, 11))

    l1 = lattice_points(build_polytope(2, 2, (1, 1, 1, 1)), 5)
    l2 = lattice_points(build_polytope(3, 1, (1, 1, 1, 4)))
    ok = l1 == [[2], [3], [4], [5]] and l2 == [[2], [3]]
    out.append(PropertyResult("polytope", "lattice enumeration examples", 0.0 if ok else 1.0, 0.0, 2))

    bad = 0
    scanned = 0
    for spec in SPECS[:3]:
        pp = spec.polytope()
        axes = [np.round(np.arange(0.1, 3.0001, 0.1), 10) for _ in range(pp.dim)]
        for point in np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, pp.dim):
            strictly_in = _slack(pp, point) > 1e-9
            strictly_out = _slack(pp, point) < -1e-9
            if not (strictly_in or strictly_out):
                continue
            scanned += 1
            phi = np.zeros(pp.dim)
            try:
                pg.validate(spec, pg.reconstruct(spec, pg.ActionAngle(point, phi)).edges)
                bad += strictly_out
            except OutsidePolytope:
                bad += strictly_in
    out.append(PropertyResult("polytope", "reconstruct on grid (0.1)", float(bad), 0.0, scanned))
    return out


def _slack(pp, d) -> float:
    val = lambda v: 0.0 if v is None else float(d[v - 2])  # noqa: E731
    return min(val(c.upper) - val(c.lower) - float(c.rhs) for c in pp.constraints)


RUNNERS: dict[str, Callable[[int, int, dict], list[PropertyResult]]] = {
    "algebra": suite_algebra,
    "flows": suite_flows,
    "gt": suite_gt,
    "polytope": suite_polytope,
}


def run(suites: Iterable[str], samples: int, seed: int, tols: dict | None = None) -> Report:
    tols = tols or {}
    report = Report(seed, samples)
    t0 = time.perf_counter()
    for name in suites:
        report.results += RUNNERS[name](samples, seed, tols)
    report.seconds = time.perf_counter() - t0
    return report
