"""Summary statistics and t-tests with no dependency beyond the stdlib."""

import math
from dataclasses import dataclass

Z95 = 1.96


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    se: float
    ci95: float
    n: int


def _mean_var(samples):
    xs = [float(x) for x in samples]
    n = len(xs)
    mean = math.fsum(xs) / n
    var = math.fsum((x - mean) ** 2 for x in xs) / (n - 1) if n > 1 else 0.0
    return mean, var, n


def ci95(samples):
    """Normal-approximation 95% interval: half-width 1.96 standard errors."""
    if len(samples) == 0:
        raise ValueError("ci95 of an empty sample")
    mean, var, n = _mean_var(samples)
    se = math.sqrt(var / n)
    return SummaryStats(mean, se, Z95 * se, n)


def _betacf(a, b, x, max_iter=300, eps=3e-16):
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = tiny if abs(d) < tiny else d
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a, b, x):
    """Regularized incomplete beta I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x in (0.0, 1.0):
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_two_sided_p(t, df):
    """P(|T| >= |t|) for Student's t with `df` degrees of freedom."""
    if math.isinf(t):
        return 0.0
    return betainc(df / 2.0, 0.5, df / (df + t * t))


def welch_t(a, b):
    """Welch's unequal-variance two-sample t-test; returns ``(t, p)``."""
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs at least two observations")
    ma, va, na = _mean_var(a)
    mb, vb, nb = _mean_var(b)
    sa, sb = va / na, vb / nb
    se2 = sa + sb
    if se2 == 0.0:
        if ma == mb:
            return 0.0, 1.0
        return math.copysign(math.inf, ma - mb), 0.0
    t = (ma - mb) / math.sqrt(se2)
    df = se2 ** 2 / (sa ** 2 / (na - 1) + sb ** 2 / (nb - 1))
    return t, t_two_sided_p(t, df)


def paired_t(diffs):
    """One-sample t-test of paired differences against zero; returns ``(t, p)``."""
    if len(diffs) < 2:
        raise ValueError("need at least two paired differences")
    mean, var, n = _mean_var(diffs)
    if var == 0.0:
        if mean == 0.0:
            return 0.0, 1.0
        return math.copysign(math.inf, mean), 0.0
    t = mean / math.sqrt(var / n)
    return t, t_two_sided_p(t, n - 1)
