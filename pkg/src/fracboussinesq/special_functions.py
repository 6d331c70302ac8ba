"""Real-axis special functions: Gamma, Mittag-Leffler E_{rho,mu}, and Wright.

The Mittag-Leffler evaluator targets the closed left half-line z <= 0 with
rho in (0, 2] and mu > 0, the parameter range the mode solver needs.  Three
regimes are stitched together:

* ``|z| <= 5``      -- defining power series with compensated summation;
* moderate ``|z|``  -- a real integral along the branch cut of the inverse
                       Laplace representation plus the contribution of the
                       conjugate pole pair (present for rho > 1), applied after
                       reducing mu into (0, rho] and climbing back through
                       ``E(rho, mu + rho; z) = (E(rho, mu; z) - 1/Gamma(mu)) / z``;
* large ``|z|``     -- the algebraic expansion ``-sum_n z^-n / Gamma(mu - rho n)``
                       truncated at its smallest term, plus the same
                       exponentially damped pole terms.

Every fast-path value carries an internal error estimate; whenever that
estimate cannot certify ~1e-13 relative accuracy the evaluator falls back to
the branch-cut quadrature, which stays accurate uniformly in the argument.
``ml_oracle`` is a deliberately slow arbitrary-precision cross-check that
refuses rather than degrade.
"""

from __future__ import annotations

import cmath
import math
import threading
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import mpmath as mp
from scipy.integrate import IntegrationWarning, quad

from .errors import ConvergenceError, DomainError, RefusalError

__all__ = [
    "MLQuery",
    "WrightQuery",
    "MLOracleResult",
    "PskhuImage",
    "gamma_real",
    "mittag_leffler",
    "ml",
    "ml_oracle",
    "wright",
    "wright_series",
    "pskhu_image_of_power",
]

_EPS = 2.220446049250313e-16
_SERIES_CUT = 5.0  # |z| up to which the defining series is summed directly
_ASYM_MIN_R = 30.0  # |z|**(1/rho) beyond which the large-argument expansion is tried
_RHO1_KUMMER_CUT = 45.0
_WRIGHT_TERM_CAP = 200_000

# mpmath precision is process-global state; the slow paths serialize around it.
_MP_LOCK = threading.RLock()


# ---------------------------------------------------------------------------
# Gamma helpers


def _sinpi(x: float) -> float:
    """sin(pi*x) with argument reduction so integer x maps to exactly 0."""
    n = round(x)
    r = x - n
    s = math.sin(math.pi * r)
    return s if n % 2 == 0 else -s


def _cospi(x: float) -> float:
    n = round(x)
    c = math.cos(math.pi * (x - n))
    return c if n % 2 == 0 else -c


def gamma_real(x: float) -> float:
    """Euler Gamma on the real line, poles excluded.

    Positive arguments go straight to the C library; negative ones use the
    reflection formula with reduced sin(pi*x) so accuracy does not collapse
    near the poles.
    """
    if math.isnan(x) or math.isinf(x):
        raise DomainError(f"gamma_real: argument must be finite, got {x}")
    if x <= 0.0 and x == round(x):
        raise DomainError(f"gamma_real: pole at non-positive integer {x}")
    if x > 0.0:
        return math.gamma(x)  # OverflowError propagates above ~171.6
    s = _sinpi(x)
    if 1.0 - x <= 171.0:
        return math.pi / (s * math.gamma(1.0 - x))
    # deep negative axis: the value is subnormal or below; go through logs
    mag = math.log(math.pi) - math.lgamma(1.0 - x) - math.log(abs(s))
    return math.copysign(math.exp(mag), s)


def _rgamma(x: float) -> float:
    """1/Gamma(x) on the real line, exactly 0 at the poles."""
    if x > 0.5:
        if x <= 171.0:
            return 1.0 / math.gamma(x)
        return math.exp(-math.lgamma(x))
    if x == round(x):
        return 0.0
    s = _sinpi(x)
    if 1.0 - x <= 171.0:
        return s * math.gamma(1.0 - x) / math.pi
    mag = math.lgamma(1.0 - x) + math.log(abs(s)) - math.log(math.pi)
    if mag > 709.0:
        raise OverflowError(f"1/Gamma({x}) overflows")
    return math.copysign(math.exp(mag), s)


def _rgamma_sign(x: float) -> float:
    if x > 0.0:
        return 1.0
    if x == round(x):
        return 0.0
    return math.copysign(1.0, _sinpi(x))


def _ln_abs_rgamma(x: float) -> float:
    """log |1/Gamma(x)|; -inf at the poles."""
    if x > 0.0:
        return -math.lgamma(x)
    if x == round(x):
        return -math.inf
    return math.lgamma(1.0 - x) + math.log(abs(_sinpi(x))) - math.log(math.pi)


class _Neumaier:
    """Compensated accumulator; also tracks the running sum of magnitudes."""

    __slots__ = ("s", "c", "abs_sum")

    def __init__(self) -> None:
        self.s = 0.0
        self.c = 0.0
        self.abs_sum = 0.0

    def add(self, t: float) -> None:
        self.abs_sum += abs(t)
        tmp = self.s + t
        if abs(self.s) >= abs(t):
            self.c += (self.s - tmp) + t
        else:
            self.c += (t - tmp) + self.s
        self.s = tmp

    @property
    def value(self) -> float:
        return self.s + self.c


# ---------------------------------------------------------------------------
# Mittag-Leffler, double precision


@dataclass(frozen=True)
class MLQuery:
    """Point query E_{rho,mu}(z) on the non-positive real axis."""

    rho: float
    mu: float
    z: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rho) and self.rho > 0.0):
            raise DomainError(f"MLQuery: rho must be positive and finite, got {self.rho}")
        if self.rho > 2.0:
            raise DomainError(f"MLQuery: rho={self.rho} outside the supported range (0, 2]")
        if not (math.isfinite(self.mu) and self.mu > 0.0):
            raise DomainError(f"MLQuery: mu must be positive and finite, got {self.mu}")
        if not (math.isfinite(self.z) and self.z <= 0.0):
            raise DomainError(f"MLQuery: z must be finite and <= 0, got {self.z}")


def _ml_series(rho: float, mu: float, z: float) -> tuple[float, float]:
    """Defining series; returns (value, absolute error estimate)."""
    acc = _Neumaier()
    n = 0
    t = 1.0
    zpow = 1.0
    while n <= 400:
        g = rho * n + mu
        if g > 171.0:
            break
        t = zpow * _rgamma(g)
        acc.add(t)
        if n > 3 and abs(t) <= 1e-18 * (abs(acc.value) + 1e-300):
            break
        n += 1
        zpow *= z
    err = acc.abs_sum * 6.0 * _EPS + abs(t)
    return acc.value, err


def _pole_pair(rho: float, mu: float, r: float) -> tuple[float, float]:
    """Conjugate pole pair s = r*exp(+-i pi/rho) of the Laplace representation.

    Present for rho > 1 only; exponentially damped on the negative axis since
    Re s = r*cos(pi/rho) < 0 for rho < 2.  Returns (value, error estimate).
    """
    s0 = r * cmath.exp(1j * math.pi / rho)
    if s0.real < -745.0:
        return 0.0, 0.0
    w = s0 ** (1.0 - mu) * cmath.exp(s0)
    # the oscillation phase Im(s0) ~ r is itself rounded, so the value noise
    # grows linearly with r
    return (2.0 / rho) * w.real, (2.0 / rho) * abs(w) * _EPS * (8.0 + 2.0 * r)


_SPLIT = 134217729.0  # 2**27 + 1, Dekker splitting constant


def _mu_minus_rho_n(mu: float, rho: float, n: int) -> tuple[float, float]:
    """mu - rho*n with an exactly-tracked distance to the nearest integer.

    The product rho*n is split error-free (n is a small integer), so the
    returned ``frac`` resolves near-pole arguments far below one ulp of the
    rounded difference.
    """
    hi = rho * _SPLIT
    hi = hi - (hi - rho)
    lo = rho - hi
    p = rho * n
    p_err = (hi * n - p) + lo * n
    s = mu - p
    # two-sum residual of mu + (-p)
    bb = s - mu
    s_err = (mu - (s - bb)) + (-p - bb)
    m0 = round(s)
    frac = (s - m0) + (s_err - p_err)
    return s, frac


def _ml_asym(rho: float, mu: float, z: float) -> tuple[float, float]:
    """Algebraic expansion at optimal truncation plus damped pole terms."""
    lam = -z
    ln_lam = math.log(lam)
    r = lam ** (1.0 / rho)
    acc = _Neumaier()
    err = 2.0 * math.exp(-r)
    # two-term window: a single near-pole dip must not look like the
    # optimal truncation point
    prev1 = prev2 = math.inf
    n_cap = min(int(r / rho) + 1, 170)
    tail = 0.0
    small_run = 0
    for n in range(1, n_cap + 1):
        x, frac = _mu_minus_rho_n(mu, rho, n)
        if x > 0.5:
            ln_rg = -math.lgamma(x)
            sign = 1.0
        elif frac == 0.0 and x <= 0.5:
            continue  # 1/Gamma vanishes at the pole; the term is exactly 0
        else:
            # reflection with the exactly-reduced fractional part
            sp = math.sin(math.pi * frac)
            if round(x) % 2 != 0:
                sp = -sp
            ln_rg = math.lgamma(1.0 - x) + math.log(abs(sp)) - math.log(math.pi)
            sign = math.copysign(1.0, sp)
        ln_t = ln_rg - n * ln_lam
        if ln_t > 700.0:
            return math.nan, math.inf
        mag = math.exp(ln_t)
        if n > 2 and mag >= max(prev1, prev2):
            tail = mag  # first omitted term
            break
        if n % 2 == 1:  # z^(-n) = (-1)^n * lam^(-n)
            sign = -sign
        acc.add(-sign * mag)
        prev2, prev1 = prev1, mag
        tail = mag
        if mag <= 1e-18 * (abs(acc.value) + 1e-300):
            small_run += 1
            if small_run >= 2:
                break
        else:
            small_run = 0
    err += tail + acc.abs_sum * 8.0 * _EPS
    total = acc.value
    if rho > 1.0:
        pv, pe = _pole_pair(rho, mu, r)
        total += pv
        err += pe
    return total, err


def _cut_breakpoints(rho: float, lam: float, upper: float) -> list[float]:
    c = _cospi(rho)
    pts: list[float] = []
    if c < 0.0:
        # near-cancellation ridge of the denominator at r^rho = lam*|cos(pi rho)|
        ridge = (lam * (-c)) ** (1.0 / rho)
        pts = [p for p in (0.5 * ridge, ridge, 1.5 * ridge) if 0.0 < p < upper]
    return pts


def _cut_plus_residues(rho: float, mu: float, lam: float) -> tuple[float, float]:
    """Branch-cut integral plus pole pair; requires mu in (0, rho].

    Returns (value, absolute error estimate).
    """
    spm = _sinpi(rho - mu)
    smu = _sinpi(mu)
    c = _cospi(rho)
    lam2 = lam * lam

    def integrand(rr: float) -> float:
        rp = rr**rho
        return (
            math.exp(-rr)
            * rr ** (rho - mu)
            * (lam * spm - rp * smu)
            / (rp * rp + 2.0 * lam * rp * c + lam2)
        )

    r_scale = lam ** (1.0 / rho)
    upper = max(60.0, 1.5 * r_scale + 40.0)
    pts = _cut_breakpoints(rho, lam, upper)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, quad_err = quad(
            integrand,
            0.0,
            upper,
            points=pts or None,
            limit=600,
            epsabs=1e-16,
            epsrel=1e-13,
        )
    if not math.isfinite(val):
        raise ConvergenceError(
            f"Mittag-Leffler branch-cut quadrature failed at rho={rho}, mu={mu}, z={-lam}"
        )
    total = -val / math.pi
    err = (abs(val) * 5.0 * _EPS + quad_err) / math.pi
    if rho > 1.0:
        pv, pe = _pole_pair(rho, mu, r_scale)
        total += pv
        err += pe
    return total, err


def _cut_plus_residues_mp(rho: float, mu: float, lam: float, dps: int = 35) -> float:
    """Extended-precision rerun for arguments where integral and pole pair cancel."""
    with _MP_LOCK, mp.workdps(dps):
        rho_m, mu_m, lam_m = mp.mpf(rho), mp.mpf(mu), mp.mpf(lam)
        spm = mp.sinpi(rho_m - mu_m)
        smu = mp.sinpi(mu_m)
        c = mp.cospi(rho_m)
        lam2 = lam_m * lam_m

        def integrand(rr):
            rp = rr**rho_m
            return (
                mp.e ** (-rr)
                * rr ** (rho_m - mu_m)
                * (lam_m * spm - rp * smu)
                / (rp * rp + 2 * lam_m * rp * c + lam2)
            )

        r_scale = lam ** (1.0 / rho)
        upper = max(60.0, 1.5 * r_scale + 40.0)
        pts = sorted(set(_cut_breakpoints(rho, lam, upper)) | {min(1.0, upper / 2.0), r_scale})
        path = [mp.mpf(0)] + [mp.mpf(p) for p in pts if 0.0 < p < upper] + [mp.mpf(upper)]
        total = -mp.quad(integrand, path) / mp.pi
        if rho > 1.0:
            # the pole location needs full precision: the result may be a
            # near-cancellation of this term against the integral
            r_m = lam_m ** (1 / rho_m)
            s0 = r_m * mp.exp(mp.mpc(0, mp.pi) / rho_m)
            if mp.re(s0) > -745:
                total += (2 / rho_m) * mp.re(s0 ** (1 - mu_m) * mp.exp(s0))
        return float(total)


def _ml_quad(rho: float, mu: float, z: float, rel_tol: float = 1e-13) -> float:
    """Reduce mu into (0, rho], evaluate by quadrature, climb back up.

    A propagated error estimate decides whether the double-precision result
    stands; deep cancellation between the integral and the pole pair (near
    real zeros of the function) triggers an extended-precision rerun.
    """
    lam = -z
    steps = 0
    mu_r = mu
    while mu_r > rho:
        mu_r -= rho
        steps += 1
    if mu_r <= 0.0:  # float drift guard
        mu_r += rho
        steps -= 1
    mu_base = mu_r
    val, err = _cut_plus_residues(rho, mu_r, lam)
    for _ in range(steps):
        val = (val - _rgamma(mu_r)) / z
        err = (err + 2.0 * _EPS * abs(_rgamma(mu_r))) / lam + 2.0 * _EPS * abs(val)
        mu_r += rho
    if val != 0.0 and err <= 2.0 * rel_tol * abs(val):
        return val
    val_mp = _cut_plus_residues_mp(rho, mu_base, lam)
    mu_r = mu_base
    if steps == 0:
        return val_mp
    with _MP_LOCK, mp.workdps(35):
        v = mp.mpf(val_mp)
        z_m = mp.mpf(z)
        for _ in range(steps):
            v = (v - mp.rgamma(mp.mpf(mu_r))) / z_m
            mu_r += rho
        return float(v)


def _ml_rho1(mu: float, z: float) -> float:
    """rho = 1: E_{1,mu}(z) = e^z 1F1(mu-1; mu; -z) / Gamma(mu), no cancellation."""
    if mu == 1.0:
        return math.exp(z)
    lam = -z
    if lam <= _RHO1_KUMMER_CUT:
        acc = _Neumaier()
        t = 1.0
        n = 0
        while abs(t) > 1e-18:
            acc.add(t)
            t *= lam * (mu - 1.0 + n) / ((mu + n) * (n + 1.0))
            n += 1
            if n > 2000:
                raise ConvergenceError(f"confluent series stalled at mu={mu}, z={z}")
        return math.exp(z) * _rgamma(mu) * acc.value
    val, _ = _ml_asym(1.0, mu, z)
    return val


def _ml_rho2_trig(mu: float, lam: float) -> float:
    x = math.sqrt(lam)
    if mu == 1.0:
        return math.cos(x)
    if mu == 2.0:
        return math.sin(x) / x
    h = math.sin(0.5 * x)
    return 2.0 * h * h / (x * x)  # (1 - cos x)/x^2 without cancellation


def mittag_leffler(rho: float, mu: float, z: float, *, rel_tol: float = 1e-13) -> float:
    """E_{rho,mu}(z) for z <= 0, rho in (0, 2], mu > 0.

    ``rel_tol`` relaxes the internal accuracy certification; integrand-grade
    callers (for whom near-zeros of E contribute nothing) can trade the last
    digits for speed.  It is clamped to [1e-13, 1e-3].
    """
    q = MLQuery(float(rho), float(mu), float(z))
    rho, mu, z = q.rho, q.mu, q.z
    rel_tol = min(max(rel_tol, 1e-13), 1e-3)
    if z == 0.0:
        return _rgamma(mu)
    lam = -z
    if rho == 1.0:
        return _ml_rho1(mu, z)
    if rho == 2.0 and mu in (1.0, 2.0, 3.0):
        return _ml_rho2_trig(mu, lam)
    if lam <= _SERIES_CUT:
        val, err = _ml_series(rho, mu, z)
        if val != 0.0 and err <= rel_tol * abs(val):
            return val
        return _ml_quad(rho, mu, z, rel_tol)  # rare small-value reroute
    if lam ** (1.0 / rho) >= _ASYM_MIN_R:
        val, err = _ml_asym(rho, mu, z)
        if math.isfinite(val) and val != 0.0 and err <= rel_tol * abs(val):
            return val
    return _ml_quad(rho, mu, z, rel_tol)


def ml(q: MLQuery) -> float:
    """Evaluate a validated Mittag-Leffler query."""
    return mittag_leffler(q.rho, q.mu, q.z)


# ---------------------------------------------------------------------------
# Arbitrary-precision oracle

_GAMMA_TABLES: dict[tuple[float, float], tuple[int, list]] = {}


def _gamma_table(rho: float, mu: float, dps: int, n: int) -> list:
    """Cached Gamma(rho*k + mu), k < n, arguments built in exact mpf arithmetic.

    Entries computed at a higher precision than requested are reused as-is;
    a request above the stored precision rebuilds the table.
    """
    key = (rho, mu)
    stored_dps, tab = _GAMMA_TABLES.get(key, (0, []))
    if stored_dps < dps:
        tab = []
        stored_dps = dps
    if len(tab) < n:
        with mp.workdps(stored_dps):
            rho_m, mu_m = mp.mpf(rho), mp.mpf(mu)
            for k in range(len(tab), n):
                tab.append(mp.gamma(rho_m * k + mu_m))
    _GAMMA_TABLES[key] = (stored_dps, tab)
    return tab


class MLOracleResult(NamedTuple):
    value: mp.mpf
    error_bound: mp.mpf
    method: str
    dps: int


def _series_cancel_digits(rho: float, mu: float, lam: float) -> float:
    """Decimal digits lost to cancellation when summing the series at -lam."""
    if lam <= 1.0:
        return 2.0
    ln_lam = math.log(lam)
    peak = 0.0
    n = 1
    step = max(1, int(lam ** (1.0 / rho) / rho / 50.0))
    while n < 10**7:
        ln_t = n * ln_lam - math.lgamma(rho * n + mu)
        peak = max(peak, ln_t)
        if n > 4 and ln_t < peak - 5.0:
            break
        n += step
    return max(peak, 0.0) / math.log(10.0)


def ml_oracle(
    q: MLQuery, significant_digits: int = 50, max_dps: int | None = None
) -> MLOracleResult:
    """Slow cross-check for ``ml`` in arbitrary precision.

    Sums the defining series with enough guard digits to absorb the
    cancellation or, when that would exceed the digit budget, evaluates the
    large-argument expansion and certifies it against its own tail estimate.
    Raises ``RefusalError`` when neither route can certify
    ``significant_digits`` of relative accuracy.
    """
    if significant_digits < 50:
        raise DomainError("ml_oracle: significant_digits must be >= 50")
    rho, mu, z = q.rho, q.mu, q.z
    if max_dps is None:
        max_dps = max(400, 4 * significant_digits)
    lam = -z
    with _MP_LOCK:
        if z == 0.0:
            with mp.workdps(significant_digits + 10):
                v = 1 / mp.gamma(mp.mpf(mu))
                bound = abs(v) * mp.mpf(10) ** (-significant_digits)
            return MLOracleResult(v, bound, "series", significant_digits + 10)
        dps = int(_series_cancel_digits(rho, mu, lam)) + significant_digits + 25
        dps = 40 * ((dps + 39) // 40)  # bucket so nearby queries share tables
        # the defining series stays authoritative while affordable; the
        # large-argument route serves the far region
        if dps <= min(max(240, significant_digits + 160), max_dps):
            value, bound = _oracle_series(rho, mu, z, dps, significant_digits)
            return MLOracleResult(value, bound, "series", dps)
        result = _oracle_asymptotic(rho, mu, z, significant_digits)
        if result is not None:
            return result
        if dps <= max_dps:
            value, bound = _oracle_series(rho, mu, z, dps, significant_digits)
            return MLOracleResult(value, bound, "series", dps)
    raise RefusalError(
        f"ml_oracle: cannot certify {significant_digits} digits at rho={rho}, "
        f"mu={mu}, z={z} within max_dps={max_dps}"
    )


def _oracle_series(
    rho: float, mu: float, z: float, dps: int, significant_digits: int
) -> tuple[mp.mpf, mp.mpf]:
    with mp.workdps(dps):
        zz = mp.mpf(z)
        s = mp.mpf(0)
        t = mp.mpf(1)
        zpow = mp.mpf(1)
        n = 0
        tab = _gamma_table(rho, mu, dps, 64)
        floor = mp.mpf(10) ** (-dps + 10)
        while True:
            if n >= len(tab):
                tab = _gamma_table(rho, mu, dps, 2 * len(tab))
            t = zpow / tab[n]
            s += t
            if n > 4 and abs(t) < floor * (abs(s) + 1):
                break
            n += 1
            zpow *= zz
            if n > 2 * 10**6:
                raise ConvergenceError("oracle series failed to terminate")
        bound = abs(s) * mp.mpf(10) ** (-significant_digits - 5) + abs(t)
        return +s, +bound


def _oracle_asymptotic(
    rho: float, mu: float, z: float, significant_digits: int
) -> MLOracleResult | None:
    dps = significant_digits + 30
    lam = -z
    with mp.workdps(dps):
        lam_m = mp.mpf(lam)
        rho_m, mu_m = mp.mpf(rho), mp.mpf(mu)
        r = lam_m ** (1 / rho_m)
        total = mp.mpf(0)
        prev1 = prev2 = mp.inf
        tail = mp.inf
        floor = mp.mpf(10) ** (-dps)
        small_run = 0
        n = 1
        n_cap = int(float(r) / rho) + 1
        while n <= n_cap:
            x = mu_m - rho_m * n
            t = (-1) ** n * lam_m ** (-n) * mp.rgamma(x)
            if n > 2 and abs(t) >= max(prev1, prev2):
                tail = abs(t)  # first omitted term
                break
            total -= t
            prev2, prev1 = prev1, abs(t)
            tail = prev1
            if prev1 < floor * (abs(total) + 1):
                small_run += 1
                if small_run >= 2:
                    break
            else:
                small_run = 0
            n += 1
        if rho > 1.0:
            s0 = r * mp.exp(mp.mpc(0, mp.pi) / rho_m)
            total += (2 / rho_m) * mp.re(s0 ** (1 - mu_m) * mp.exp(s0))
        bound = 4 * tail + 4 * mp.exp(-r)
        if total != 0 and bound <= abs(total) * mp.mpf(10) ** (-significant_digits):
            return MLOracleResult(+total, +bound, "asymptotic", dps)
    return None


# ---------------------------------------------------------------------------
# Wright function


@dataclass(frozen=True)
class WrightQuery:
    """Point query phi(delta, beta; z) = sum_k z^k / (k! Gamma(beta + delta k))."""

    delta: float
    beta: float
    z: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and self.delta > -1.0):
            raise DomainError(f"WrightQuery: delta must be > -1, got {self.delta}")
        if not math.isfinite(self.beta):
            raise DomainError("WrightQuery: beta must be finite")
        if not math.isfinite(self.z):
            raise DomainError("WrightQuery: z must be finite")


def wright_series(delta: float, beta: float, z: float) -> float:
    """phi(delta, beta; z) by direct summation.

    Terms where Gamma sits at a pole contribute exactly zero.  The fast path
    runs in double precision with compensated summation; when its own
    cancellation estimate shows double precision cannot reach ~1e-11 relative
    accuracy (deeply negative z with delta < 0) the sum is redone in mpmath.
    Term count grows like ``|z|**(1/(1+delta))``, so arguments far into the
    delta -> -1 corner raise ``ConvergenceError`` instead of stalling.
    """
    q = WrightQuery(float(delta), float(beta), float(z))
    delta, beta, z = q.delta, q.beta, q.z
    if z == 0.0:
        return _rgamma(beta)
    ln_az = math.log(abs(z))
    acc = _Neumaier()
    peak_ln = -math.inf
    small_run = 0
    overflow = False
    k = 0
    while k <= _WRIGHT_TERM_CAP:
        g = beta + delta * k
        sgn = _rgamma_sign(g)
        if z < 0.0 and k % 2 == 1:
            sgn = -sgn
        if sgn == 0.0:
            ln_t = -math.inf
            t = 0.0
        else:
            ln_t = k * ln_az - math.lgamma(k + 1.0) + _ln_abs_rgamma(g)
            if ln_t > 705.0:
                overflow = True
                break
            t = sgn * math.exp(ln_t)
        acc.add(t)
        peak_ln = max(peak_ln, ln_t)
        if k > 6 and ln_t < min(peak_ln - 8.0, math.log(abs(acc.value) + 1e-300) - 41.0):
            small_run += 1
            if small_run >= 4:
                break
        else:
            small_run = 0
        k += 1
    else:
        raise ConvergenceError(
            f"Wright series needs more than {_WRIGHT_TERM_CAP} terms at "
            f"delta={delta}, beta={beta}, z={z}"
        )
    val = acc.value
    err = acc.abs_sum * 1e-13  # term rounding via exp(log) plus summation
    if not overflow and val != 0.0 and err <= 1e-11 * abs(val):
        return val
    return _wright_mp(delta, beta, z, peak_ln)


def _wright_mp(delta: float, beta: float, z: float, peak_ln: float) -> float:
    """Arbitrary-precision rerun of the Wright series."""
    dps = max(30, int(max(peak_ln, 0.0) / math.log(10.0)) + 35)
    with _MP_LOCK, mp.workdps(dps):
        d_m, b_m, z_m = mp.mpf(delta), mp.mpf(beta), mp.mpf(z)
        s = mp.mpf(0)
        floor = mp.mpf(10) ** (-dps + 8)
        small_run = 0
        k = 0
        zk = mp.mpf(1)
        kfact = mp.mpf(1)
        while k <= _WRIGHT_TERM_CAP:
            t = zk / kfact * mp.rgamma(b_m + d_m * k)
            s += t
            if k > 6 and abs(t) < floor * (abs(s) + 1):
                small_run += 1
                if small_run >= 4:
                    return float(s)
            else:
                small_run = 0
            k += 1
            zk *= z_m
            kfact *= k
        raise ConvergenceError(
            f"Wright series needs more than {_WRIGHT_TERM_CAP} terms at "
            f"delta={delta}, beta={beta}, z={z}"
        )


def wright(q: WrightQuery) -> float:
    """Evaluate a validated Wright query."""
    return wright_series(q.delta, q.beta, q.z)


# ---------------------------------------------------------------------------
# Power-function image under the Wright-kernel integral transform


class PskhuImage(NamedTuple):
    value: float
    tail_estimate: float


def pskhu_image_of_power(
    alpha: float,
    beta: float,
    gamma_exp: float,
    t: float,
    *,
    rel_tol: float = 1e-8,
    quad_limit: int = 300,
) -> PskhuImage:
    """Image of s**(gamma_exp - 1) under the Wright-kernel integral transform.

    Evaluates ``t**(beta-1) * integral_0^inf s**(gamma_exp-1) *
    phi(-alpha, beta; -s/t**alpha) ds`` by truncated adaptive quadrature; the
    closed form it is checked against is
    ``t**(alpha*gamma_exp+beta-1) * Gamma(gamma_exp)/Gamma(alpha*gamma_exp+beta)``.

    Restricted to alpha in (0, 1), where the kernel parameter -alpha stays
    inside the Wright function's domain.
    """
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"pskhu_image_of_power: alpha must lie in (0, 1), got {alpha}")
    if gamma_exp <= 0.0:
        raise DomainError("pskhu_image_of_power: gamma_exp must be positive")
    if t <= 0.0:
        raise DomainError("pskhu_image_of_power: t must be positive")

    def kernel(x: float) -> float:
        return wright_series(-alpha, beta, -x)

    # substituting x = s / t**alpha leaves a t-independent integral J
    scale = max(abs(kernel(0.0)), abs(kernel(0.5)), abs(kernel(1.0)), 1e-12)
    x_hi = 2.0
    while abs(kernel(x_hi)) > 1e-13 * scale and x_hi < 400.0:
        x_hi *= 1.3

    def integrand(x: float) -> float:
        return x ** (gamma_exp - 1.0) * kernel(x)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        j_head, e_head = quad(integrand, 0.0, 1.0, limit=quad_limit, epsabs=1e-13, epsrel=1e-11)
        j_tail, e_tail = quad(integrand, 1.0, x_hi, limit=quad_limit, epsabs=1e-13, epsrel=1e-11)
    j = j_head + j_tail
    # e-folding length of the kernel decay at the truncation point
    k_cut = abs(kernel(x_hi))
    k_in = abs(kernel(0.95 * x_hi))
    if k_in > k_cut > 0.0:
        efold = 0.05 * x_hi / math.log(k_in / k_cut)
    else:
        efold = 0.05 * x_hi
    tail = k_cut * x_hi ** (gamma_exp - 1.0) * max(efold, 1e-6) + e_head + e_tail
    if j != 0.0 and tail > rel_tol * abs(j):
        raise ConvergenceError(
            f"pskhu_image_of_power: truncation estimate {tail:.3e} exceeds "
            f"{rel_tol:.1e}*|J| at alpha={alpha}, beta={beta}, gamma={gamma_exp}"
        )
    power = alpha * gamma_exp + beta - 1.0
    return PskhuImage(t**power * j, t**power * tail)
