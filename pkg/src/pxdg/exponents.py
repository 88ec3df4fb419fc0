"""Variable exponents p(x) and Luxemburg norms over discrete (weighted-sample) measures.

All integrals are taken against a ``WeightedSampleSet`` supplied by the caller:
a quadrature rule for volume integrals, a counting measure for face sums.
Nothing here integrates analytically.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import composite_points, gauss_legendre

__all__ = [
    "DomainError",
    "ExponentField",
    "WeightedSampleSet",
    "modular",
    "luxemburg_norm",
    "check_modular_norm_relations",
    "log_holder_bound",
    "pointwise_inequalities",
    "estimate_c_log",
]


class DomainError(ValueError):
    """Evaluation point outside the closure of the field's domain."""


@dataclass(frozen=True)
class ExponentField:
    """A bounded exponent x -> p(x) on an interval, with 1 <= p1 <= p <= p2 < inf.

    kind is one of:
      * ``const``: p identically ``value``
      * ``hat``:   p(x) = ((1-eps)/a)|x| + 1 + eps on |x| <= a, and 2 on a <= |x|;
                   the V-shaped profile dipping to 1+eps at the origin
      * ``pwl``:   piecewise linear through (xs, vals)
    """

    kind: str
    domain: tuple
    value: float = 0.0
    eps: float = 0.0
    a: float = 0.0
    xs: tuple = ()
    vals: tuple = ()
    c_log: float = field(default=0.0)

    @staticmethod
    def constant(value, domain=(-math.inf, math.inf)):
        if value < 1.0:
            raise ValueError("exponent must satisfy p >= 1")
        return ExponentField("const", tuple(domain), value=float(value), c_log=0.0)

    @staticmethod
    def hat_family(eps, a, domain=(-1.0, 1.0), c_log=None):
        if not (0.0 < eps < 1.0 and 0.0 < a < 1.0):
            raise ValueError("hat family needs 0 < eps, a < 1")
        f = ExponentField("hat", tuple(domain), eps=float(eps), a=float(a))
        if c_log is None:
            c_log = estimate_c_log(f)
        object.__setattr__(f, "c_log", float(c_log))
        return f

    @staticmethod
    def piecewise_linear(xs, vals, c_log=None):
        xs = tuple(float(x) for x in xs)
        vals = tuple(float(v) for v in vals)
        if len(xs) != len(vals) or len(xs) < 2:
            raise ValueError("need matching breakpoints and values, at least two")
        if any(x1 >= x2 for x1, x2 in zip(xs, xs[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if min(vals) < 1.0:
            raise ValueError("exponent must satisfy p >= 1")
        f = ExponentField("pwl", (xs[0], xs[-1]), xs=xs, vals=vals)
        if c_log is None:
            c_log = estimate_c_log(f)
        object.__setattr__(f, "c_log", float(c_log))
        return f

    @property
    def p1(self):
        if self.kind == "const":
            return self.value
        if self.kind == "hat":
            return 1.0 + self.eps
        return min(self.vals)

    @property
    def p2(self):
        if self.kind == "const":
            return self.value
        if self.kind == "hat":
            return 2.0
        return max(self.vals)

    def _check_domain(self, x):
        lo, hi = self.domain
        tol = 1e-12 * max(1.0, abs(lo) if math.isfinite(lo) else 0.0,
                          abs(hi) if math.isfinite(hi) else 0.0)
        if np.any(np.asarray(x) < lo - tol) or np.any(np.asarray(x) > hi + tol):
            raise DomainError(f"point outside domain {self.domain}")

    def __call__(self, x):
        """Evaluate p(x); accepts scalars or arrays, errors outside the domain."""
        scalar = np.isscalar(x)
        x = np.asarray(x, dtype=float)
        self._check_domain(x)
        if self.kind == "const":
            p = np.full_like(x, self.value)
        elif self.kind == "hat":
            # 2 - (1-eps)(1 - t) with t = min(|x|,a)/a hits both endpoint
            # values exactly: p(0) = 1+eps, p(+-a) = 2
            t = np.minimum(np.abs(x), self.a) / self.a
            p = 2.0 - (1.0 - self.eps) * (1.0 - t)
        else:
            p = np.interp(x, self.xs, self.vals)
        return float(p) if scalar else p

    def conjugate(self, x):
        """Conjugate exponent p'(x) with 1/p + 1/p' = 1; inf where p = 1."""
        p = np.asarray(self(x), dtype=float)
        with np.errstate(divide="ignore"):
            out = np.where(p > 1.0, p / np.maximum(p - 1.0, 1e-300), np.inf)
        return float(out) if np.isscalar(x) else out

    def neg_inv_conjugate(self, x):
        """The exponent -1/p'(x) = (1-p)/p, read as 0 where p = 1."""
        p = np.asarray(self(x), dtype=float)
        out = (1.0 - p) / p
        return float(out) if np.isscalar(x) else out

    def to_text(self):
        if self.kind == "const":
            return f"kind=const value={self.value:.17g}"
        if self.kind == "hat":
            return f"kind=hat eps={self.eps:.17g} a={self.a:.17g}"
        xs = ",".join(f"{x:.17g}" for x in self.xs)
        vals = ",".join(f"{v:.17g}" for v in self.vals)
        return f"kind=pwl xs={xs} vals={vals}"

    @staticmethod
    def from_text(text):
        kv = dict(tok.split("=", 1) for tok in text.split())
        kind = kv.get("kind")
        if kind == "const":
            return ExponentField.constant(float(kv["value"]))
        if kind == "hat":
            return ExponentField.hat_family(float(kv["eps"]), float(kv["a"]))
        if kind == "pwl":
            xs = [float(t) for t in kv["xs"].split(",")]
            vals = [float(t) for t in kv["vals"].split(",")]
            return ExponentField.piecewise_linear(xs, vals)
        raise ValueError(f"unknown exponent field spec {text!r}")


@dataclass(frozen=True)
class WeightedSampleSet:
    """A discrete measure: points x_i with weights w_i >= 0."""

    xs: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        xs = np.atleast_1d(np.asarray(self.xs, dtype=float))
        ws = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if xs.shape != ws.shape:
            raise ValueError("points and weights must have matching shape")
        if np.any(ws < 0.0):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "weights", ws)

    @staticmethod
    def counting(xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        return WeightedSampleSet(xs, np.ones_like(xs))

    @staticmethod
    def gauss(a, b, points_per_panel=8, panels=1):
        """Composite Gauss-Legendre samples of the interval (a, b)."""
        nodes = np.linspace(a, b, panels + 1)
        gx, gw = gauss_legendre(points_per_panel)
        xq, wq = composite_points(nodes, gx, gw)
        return WeightedSampleSet(xq.ravel(), wq.ravel())

    @property
    def total_weight(self):
        return float(np.sum(self.weights))


def modular(samples, values, fld):
    """The modular sum_i w_i |u_i|^{p(x_i)} of samples u_i = u(x_i)."""
    values = np.asarray(values, dtype=float)
    p = fld(samples.xs)
    return float(np.sum(samples.weights * np.abs(values) ** p))


def _modular_and_slope(samples, values, fld, k, p):
    """rho(u/k) and d rho(u/k) / dk for the Newton polish."""
    t = np.abs(values) / k
    tp = t**p
    rho = float(np.sum(samples.weights * tp))
    drho = -float(np.sum(samples.weights * p * tp)) / k
    return rho, drho


def luxemburg_norm(samples, values, fld, rtol=1e-12):
    """inf{k > 0 : modular(u/k) <= 1}, by bracketing + bisection with Newton polish.

    k -> modular(u/k) is continuous and strictly decreasing while positive, so the
    root of modular(u/k) = 1 is simple. Returns 0 for the zero function.
    """
    values = np.asarray(values, dtype=float)
    mask = samples.weights > 0.0
    if not np.any(np.abs(values[mask]) > 0.0):
        return 0.0
    p = fld(samples.xs)
    rho = float(np.sum(samples.weights * np.abs(values) ** p))
    if rho == 0.0:
        return 0.0
    p1, p2 = fld.p1, fld.p2
    # modular/norm comparison bounds give the initial bracket
    if rho >= 1.0:
        lo, hi = rho ** (1.0 / p2), rho ** (1.0 / p1)
    else:
        lo, hi = rho ** (1.0 / p1), rho ** (1.0 / p2)
    lo, hi = min(lo, 1.0), max(hi, 1.0)
    # expand until modular(u/lo) >= 1 >= modular(u/hi)
    for _ in range(200):
        if _modular_and_slope(samples, values, fld, lo, p)[0] >= 1.0:
            break
        lo *= 0.5
    for _ in range(200):
        if _modular_and_slope(samples, values, fld, hi, p)[0] <= 1.0:
            break
        hi *= 2.0
    for _ in range(200):
        if hi - lo <= rtol * hi:
            break
        mid = 0.5 * (lo + hi)
        if _modular_and_slope(samples, values, fld, mid, p)[0] > 1.0:
            lo = mid
        else:
            hi = mid
    k = 0.5 * (lo + hi)
    for _ in range(3):
        r, dr = _modular_and_slope(samples, values, fld, k, p)
        if dr == 0.0:
            break
        step = (r - 1.0) / dr
        knew = k - step
        if not (lo <= knew <= hi):
            break
        k = knew
    return float(k)


@dataclass(frozen=True)
class ModularNormReport:
    lam: float
    rho: float
    item1_ok: bool
    item2_ok: bool
    item3_ok: bool
    slack: float

    @property
    def passed(self):
        return self.item1_ok and self.item2_ok and self.item3_ok


def check_modular_norm_relations(samples, values, fld, slack=1e-9):
    """Verify the unit-ball trichotomy and the lambda^{p1}/lambda^{p2} sandwiches.

    With lam the Luxemburg norm and rho the modular: lam < 1 iff rho < 1 (same for
    = and >); lam >= 1 implies lam^{p1} <= rho <= lam^{p2}; lam <= 1 implies
    lam^{p2} <= rho <= lam^{p1}.  Comparisons carry ``slack`` for roundoff.
    """
    lam = luxemburg_norm(samples, values, fld)
    rho = modular(samples, values, fld)
    p1, p2 = fld.p1, fld.p2
    if lam == 0.0:
        ok1 = rho <= slack
        return ModularNormReport(lam, rho, ok1, True, True, abs(rho))
    s = slack * max(1.0, rho)
    near_one = abs(lam - 1.0) <= slack
    if near_one:
        item1 = abs(rho - 1.0) <= s
    elif lam < 1.0:
        item1 = rho < 1.0 + s
    else:
        item1 = rho > 1.0 - s
    item2 = True
    item3 = True
    if lam >= 1.0 - slack:
        item2 = (lam**p1 <= rho + s) and (rho <= lam**p2 + s)
    if lam <= 1.0 + slack:
        item3 = (lam**p2 <= rho + s) and (rho <= lam**p1 + s)
    worst = max(
        abs(rho - 1.0) if near_one else 0.0,
        (lam**p1 - rho) if lam >= 1.0 else 0.0,
        (lam**p2 - rho) if lam <= 1.0 else 0.0,
    )
    return ModularNormReport(lam, rho, item1, item2, item3, worst)


def log_holder_bound(fld, alpha, interval, n_samples=513):
    """max over sampled x, y in the interval of h^{alpha (p(x)-p(y))}, h = diam.

    Bounded uniformly in h for log-Holder fields; grows like h^{-alpha*gap} across
    a jump of size gap.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    a, b = interval
    xs = np.linspace(a, b, n_samples)
    if fld.kind == "pwl":
        inside = [x for x in fld.xs if a < x < b]
        if inside:
            xs = np.sort(np.concatenate([xs, inside]))
    p = fld(xs)
    h = b - a
    gap = float(np.max(p) - np.min(p))
    if h == 1.0 or gap == 0.0:
        return 1.0
    e = alpha * gap
    return float(max(h**e, h**-e))


@dataclass(frozen=True)
class PointwiseInequalityReport:
    px: float
    monotone_pairing: float
    c_min_power: float
    c_min_degenerate: float
    c_min_splitting: float
    splitting_bound_ok: bool


def pointwise_inequalities(eta, xi, px):
    """Minimal constants for the three pointwise power inequalities at (eta, xi, p).

    The pairing (|eta|^{p-2}eta - |xi|^{p-2}xi)(eta - xi) is nonnegative; the first
    inequality bounds |eta-xi|^p by it (p >= 2), the second bounds
    |eta-xi|^2 (|eta|+|xi|)^{p-2} by it (p < 2), and the third is the splitting
    |eta|^p <= 2^{p-1}(|eta-xi|^p + |xi|^p) (p >= 1).
    """
    if px < 1.0:
        raise ValueError("need p >= 1")

    def flux(t):
        return abs(t) ** (px - 2.0) * t if t != 0.0 else 0.0

    d = eta - xi
    pairing = (flux(eta) - flux(xi)) * d

    def ratio(lhs):
        if lhs == 0.0:
            return 0.0
        return lhs / pairing if pairing > 0.0 else math.inf

    c1 = ratio(abs(d) ** px) if px >= 2.0 else 0.0
    if px < 2.0:
        s = abs(eta) + abs(xi)
        lhs2 = d * d * s ** (px - 2.0) if s > 0.0 else 0.0
        c2 = ratio(lhs2)
    else:
        c2 = 0.0
    rhs3 = abs(d) ** px + abs(xi) ** px
    if abs(eta) == 0.0:
        c3 = 0.0
    elif rhs3 == 0.0:
        c3 = math.inf
    else:
        c3 = abs(eta) ** px / rhs3
    ok3 = c3 <= 2.0 ** (px - 1.0) * (1.0 + 1e-12)
    return PointwiseInequalityReport(px, pairing, c1, c2, c3, ok3)


def estimate_c_log(fld, n_levels=20, n_base=129):
    """Sampled log-Holder constant: sup |p(x)-p(y)| log(e + 1/|x-y|) over dyadic pairs."""
    lo, hi = fld.domain
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return 0.0
    width = hi - lo
    best = 0.0
    for j in range(n_levels):
        d = width * 2.0 ** -(j + 1)
        xs = np.linspace(lo, hi - d, n_base)
        dp = np.abs(np.asarray(fld(xs + d)) - np.asarray(fld(xs)))
        best = max(best, float(np.max(dp)) * math.log(math.e + 1.0 / d))
    return best
