"""Period-finding factorization of odd composites.

The classical driver (steps 1 and 3-5) wraps a simulated quantum
order-finding step.  Two simulation tiers:

* the production sampler draws the measured value ``y`` from the exact
  closed-form distribution of the order-finding measurement, computable in
  O(1) per ``y`` from the period, so registers up to Q = 2^14 cost nothing;
* a literal two-register state-vector pipeline (`simulate_order_finding_register`)
  serves as an independent cross-check at small Q.

Number theory is plain integer arithmetic (Python ints are exact); moduli
are capped at 2^31, desk scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .measure import RandomSource

__all__ = [
    "ContinuedFraction",
    "PeriodicOracle",
    "ShorConfig",
    "ConvergentTest",
    "ShorAttempt",
    "ShorTrace",
    "FactoringFailure",
    "gcd",
    "mod_pow",
    "continued_fraction_expand",
    "smallest_residue",
    "d_of_y",
    "prob_y_closed_form",
    "prob_y_bruteforce",
    "measurement_distribution",
    "sample_measurement",
    "recover_period",
    "shor_factor",
    "success_lower_bound",
    "success_lower_bound_simplified",
    "lb_anchor",
    "default_register_size",
    "simulate_order_finding_register",
]

_N_CAP = 1 << 31


def gcd(a: int, b: int) -> int:
    """Greatest common divisor by the Euclidean algorithm."""
    a, b = int(a), int(b)
    if a < 0 or b < 0:
        raise ValueError("gcd arguments must be non-negative")
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    return math.gcd(a, b)


def mod_pow(m: int, e: int, n: int) -> int:
    """m^e mod n by square-and-multiply (O(lg e) multiplications)."""
    if n < 1:
        raise ValueError(f"modulus must be >= 1, got {n}")
    if e < 0:
        raise ValueError("negative exponent")
    return pow(int(m), int(e), int(n))


@dataclass(frozen=True)
class ContinuedFraction:
    """Expansion [a_0, a_1, ...] of a rational with all convergents p_n/q_n.

    The recurrences p_n = a_n p_{n-1} + p_{n-2} and q_n = a_n q_{n-1} + q_{n-2}
    hold, gcd(p_n, q_n) = 1, and the final quotient exceeds 1 unless the
    expansion is a single term.
    """

    quotients: tuple[int, ...]
    numerators: tuple[int, ...]
    denominators: tuple[int, ...]


def continued_fraction_expand(y: int, q: int) -> ContinuedFraction:
    """Terminating continued-fraction expansion of y/q (0 <= y < q allowed wider)."""
    y, q = int(y), int(q)
    if q < 1:
        raise ValueError(f"denominator must be >= 1, got {q}")
    if y < 0:
        raise ValueError(f"numerator must be >= 0, got {y}")
    quotients = []
    num, den = y, q
    while den:
        a, num = divmod(num, den)
        quotients.append(a)
        num, den = den, num
    ps: list[int] = []
    qs: list[int] = []
    for i, a in enumerate(quotients):
        if i == 0:
            ps.append(a)
            qs.append(1)
        elif i == 1:
            ps.append(a * ps[0] + 1)
            qs.append(a)
        else:
            ps.append(a * ps[-1] + ps[-2])
            qs.append(a * qs[-1] + qs[-2])
    return ContinuedFraction(tuple(quotients), tuple(ps), tuple(qs))


def smallest_residue(a: int, q: int) -> int:
    """The residue of ``a`` mod ``q`` of smallest magnitude, in (-q/2, q/2]."""
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    r = int(a) % q
    if 2 * r > q:
        r -= q
    return r


def d_of_y(y: int, p: int, q: int) -> int:
    """round(p*y/q), half rounded up; inverts y(d) = round(q*d/p) on the lucky set."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    return (2 * int(p) * int(y) + q) // (2 * q)


def prob_y_closed_form(y: int, p: int, q: int) -> float:
    """Exact probability of measuring ``y`` when the hidden period is ``p``.

    Two branches: a sin^2 ratio when p*y is not 0 mod q, and the counting
    formula (r(Q0+p)^2 + (p-r)Q0^2) / (q^2 p^2) when it is.  The sin^2
    arguments are reduced with exact integer arithmetic first, so no
    precision is lost to huge angles.
    """
    y, p, q = int(y), int(p), int(q)
    if not 0 <= y < q:
        raise ValueError(f"y = {y} outside [0, {q})")
    if not 1 <= p <= q:
        raise ValueError(f"period {p} outside [1, {q}]")
    quot, r = divmod(q, p)
    q0 = p * quot
    if (p * y) % q == 0:
        return (r * (q0 + p) ** 2 + (p - r) * q0**2) / (q**2 * p**2)
    m_hi = (y * (quot + 1) * p) % q
    m_lo = (y * quot * p) % q
    m_den = (p * y) % q
    num = r * math.sin(math.pi * m_hi / q) ** 2 + (p - r) * math.sin(math.pi * m_lo / q) ** 2
    den = q**2 * math.sin(math.pi * m_den / q) ** 2
    return num / den


@dataclass(frozen=True)
class PeriodicOracle:
    """The function x -> m^x mod n, with its period precomputed for simulation.

    The period is simulation-side knowledge: recovery logic never reads it,
    only the membership test ``m^q = 1 mod n``.
    """

    m: int
    n: int
    period: int
    values: tuple[int, ...]

    @classmethod
    def for_base(cls, m: int, n: int) -> "PeriodicOracle":
        m, n = int(m), int(n)
        if n < 2 or n >= _N_CAP:
            raise ValueError(f"modulus {n} outside [2, 2^31)")
        if math.gcd(m, n) != 1:
            raise ValueError(f"base {m} shares a factor with {n}")
        values = [1]
        acc = m % n
        while acc != 1:
            values.append(acc)
            acc = (acc * m) % n
        return cls(m=m, n=n, period=len(values), values=tuple(values))

    def __call__(self, x: int) -> int:
        return self.values[x % self.period]


def prob_y_bruteforce(y: int, oracle: PeriodicOracle, q: int) -> float:
    """Measurement probability by direct summation (independent of the closed form).

    Groups the Q register values by the oracle's output, sums omega^{xy}
    within each group term by term, and returns sum |.|^2 / Q^2.
    """
    y, q = int(y), int(q)
    p = oracle.period
    omega_y = np.exp(2j * math.pi * y / q)
    total = 0.0
    for x0 in range(p):
        xs = np.arange(x0, q, p, dtype=np.float64)
        total += abs(np.sum(omega_y**xs)) ** 2
    return total / q**2


@lru_cache(maxsize=32)
def measurement_distribution(p: int, q: int) -> np.ndarray:
    """Full closed-form distribution over y = 0..q-1 (cached; read-only array)."""
    probs = np.array([prob_y_closed_form(y, p, q) for y in range(q)], dtype=np.float64)
    probs.setflags(write=False)
    return probs


def sample_measurement(oracle: PeriodicOracle, q: int, rng: RandomSource) -> int:
    """Draw a register measurement from the exact distribution (seed-deterministic)."""
    probs = measurement_distribution(oracle.period, int(q))
    u = rng.random() * probs.sum()
    y = int(np.searchsorted(np.cumsum(probs), u, side="right"))
    return min(y, q - 1)


@dataclass(frozen=True)
class ConvergentTest:
    """One loop pass of step 2.5: the convergent tried and the verdict."""

    n: int
    p_n: int
    q_n: int
    mod_pow_value: int
    accepted: bool


def recover_period(
    y: int, q: int, order_test: Callable[[int], int]
) -> tuple[int | None, list[ConvergentTest]]:
    """Walk the convergents of y/q until one denominator passes the order test.

    ``order_test(candidate)`` returns m^candidate mod N; a result of 1 accepts.
    Returns (period or None, the audit list of tested convergents).
    """
    cf = continued_fraction_expand(y, q)
    tested: list[ConvergentTest] = []
    seen: set[int] = set()
    for n in range(len(cf.quotients)):
        qn = cf.denominators[n]
        if qn <= 1 or qn in seen:
            continue
        seen.add(qn)
        value = order_test(qn)
        accepted = value == 1
        tested.append(ConvergentTest(n, cf.numerators[n], qn, value, accepted))
        if accepted:
            return qn, tested
    return None, tested


def default_register_size(n: int) -> int:
    """The power of two Q with N^2 <= Q < 2 N^2."""
    q = 1
    while q < n * n:
        q <<= 1
    return q


@dataclass(frozen=True)
class ShorConfig:
    """Run parameters; ``q`` defaults to the canonical register size for ``n``."""

    n: int
    q: int | None = None
    max_restarts: int = 32
    forced_m: int | None = None
    forced_y: int | None = None

    def register_size(self) -> int:
        q = self.q if self.q is not None else default_register_size(self.n)
        if q & (q - 1) or not self.n**2 <= q < 2 * self.n**2:
            raise ValueError(f"Q = {q} is not a power of 2 in [N^2, 2N^2) for N = {self.n}")
        return q


@dataclass
class ShorAttempt:
    """Audit record of one pass through steps 1-5."""

    m: int
    gcd_m: int
    y: int | None = None
    d_y: int | None = None
    convergents: list[ConvergentTest] = field(default_factory=list)
    period: int | None = None
    step3: str | None = None
    step4: str | None = None
    factors: tuple[int, int] | None = None
    note: str | None = None


@dataclass
class ShorTrace:
    """Every decision of a full run, one line per event when rendered."""

    n: int
    q: int
    attempts: list[ShorAttempt] = field(default_factory=list)
    factors: tuple[int, int] | None = None

    def lines(self) -> list[str]:
        out = [f"N = {self.n}", f"Q = {self.q}"]
        for k, a in enumerate(self.attempts, start=1):
            out.append(f"attempt = {k}")
            out.append(f"m = {a.m}")
            out.append(f"gcd(m,N) = {a.gcd_m}")
            if a.note:
                out.append(f"note = {a.note}")
            if a.y is not None:
                out.append(f"y = {a.y}")
            for c in a.convergents:
                verdict = "accept" if c.accepted else "reject"
                out.append(
                    f"convergent n={c.n} p={c.p_n} q={c.q_n} "
                    f"m^q={c.mod_pow_value} {verdict}"
                )
            if a.period is not None:
                out.append(f"period = {a.period}")
            if a.d_y is not None:
                out.append(f"d(y) = {a.d_y}")
            if a.step3:
                out.append(f"step3 = {a.step3}")
            if a.step4:
                out.append(f"step4 = {a.step4}")
            if a.factors:
                out.append(f"cofactor = {a.factors[1]}")
                out.append(f"factor = {a.factors[0]}")
        return out


class FactoringFailure(RuntimeError):
    """Raised when every restart is exhausted without a nontrivial factor."""

    def __init__(self, message: str, trace: ShorTrace):
        super().__init__(message)
        self.trace = trace


def shor_factor(
    n: int, rng: RandomSource, config: ShorConfig | None = None
) -> tuple[tuple[int, int], ShorTrace]:
    """Factor an odd composite; returns ((d, n//d), full audit trace).

    Restarts on the step-3 (odd period) and step-4 (m^{P/2} = -1) branches
    and on unlucky measurements, up to ``max_restarts`` passes.  Primes and
    prime powers exhaust the restarts and raise with a diagnostic.
    """
    n = int(n)
    cfg = config or ShorConfig(n)
    if cfg.n != n:
        raise ValueError("config built for a different N")
    if n % 2 == 0:
        raise ValueError("N must be odd (divide out 2 first)")
    if n < 3:
        raise ValueError("N must exceed 2")
    if n >= _N_CAP:
        raise ValueError(f"N = {n} exceeds the 2^31 cap")
    q = cfg.register_size()
    trace = ShorTrace(n=n, q=q)

    forced_m, forced_y = cfg.forced_m, cfg.forced_y
    for _ in range(cfg.max_restarts):
        m = forced_m if forced_m is not None else rng.integer(2, n - 2)
        forced_m = None
        g = math.gcd(m, n)
        attempt = ShorAttempt(m=m, gcd_m=g)
        trace.attempts.append(attempt)
        if g != 1:
            attempt.note = "gcd already nontrivial"
            attempt.factors = (g, n // g)
            trace.factors = attempt.factors
            return attempt.factors, trace

        oracle = PeriodicOracle.for_base(m, n)
        y = forced_y if forced_y is not None else sample_measurement(oracle, q, rng)
        forced_y = None
        attempt.y = y

        period, tested = recover_period(y, q, lambda cand: pow(m, cand, n))
        attempt.convergents = tested
        if period is None:
            attempt.note = "no convergent denominator passed the order test"
            continue
        attempt.period = period
        attempt.d_y = d_of_y(y, period, q)

        if period % 2 == 1:
            attempt.step3 = "period odd, restart"
            continue
        attempt.step3 = "period even"

        half = pow(m, period // 2, n)
        if (half + 1) % n == 0:
            attempt.step4 = "m^(P/2) = -1 mod N, restart"
            continue
        attempt.step4 = f"m^(P/2) = {half} mod N"

        d = math.gcd(half - 1, n)
        if d in (1, n):
            attempt.note = f"gcd({half - 1}, {n}) trivial"
            continue
        attempt.factors = (d, n // d)
        trace.factors = attempt.factors
        return attempt.factors, trace

    raise FactoringFailure(
        f"no nontrivial factor of {n} after {cfg.max_restarts} restarts "
        "(is N prime or a prime power?)",
        trace,
    )


# Lower-bound anchors for the totient-ratio constant, by period.
_LB_TABLE = (
    (3, 0.062),
    (4, 0.163),
    (5, 0.194),
    (7, 0.303),
    (13, 0.326),
    (31, 0.375),
    (61, 0.383),
    (211, 0.411),
    (421, 0.425),
    (631, 0.435),
    (841, 0.468),
)


def lb_anchor(p: int) -> float:
    """Conservative table anchor: the entry at the largest tabulated period <= p."""
    if p < 3:
        raise ValueError("bound is defined for periods >= 3")
    best = _LB_TABLE[0][1]
    for key, val in _LB_TABLE:
        if key <= p:
            best = val
    return best


def _lglg(n: int) -> float:
    return math.log2(math.log2(n))


def success_lower_bound(n: int, p: int) -> float:
    """Lower bound on the chance one measurement yields the period.

    (4 / (pi^2 ln 2)) * anchor(P) / lglg(N) * (1 - 1/N)^2, with the anchor
    from the conservative table.
    """
    if p < 3:
        raise ValueError("bound is defined for periods >= 3")
    return (4 / (math.pi**2 * math.log(2))) * lb_anchor(p) / _lglg(n) * (1 - 1 / n) ** 2


def success_lower_bound_simplified(n: int) -> float:
    """The constant-form bound 0.232 / lglg(N) * (1 - 1/N)^2, valid for periods > 3."""
    return 0.232 / _lglg(n) * (1 - 1 / n) ** 2


def simulate_order_finding_register(m: int, n: int, q: int) -> np.ndarray:
    """Literal two-register pipeline; returns the measured-value distribution.

    Builds |0>|0>, Fourier-transforms register 1 (dense Q-point unitary),
    applies the reversible oracle |x>|l> -> |x>|f(x) - l mod n> as a basis
    permutation, Fourier-transforms register 1 again, and reads off the
    marginal probabilities of register 1.  Validation tier: Q <= 2^8.
    """
    from .gates import Circuit, CircuitStep, Gate, apply_circuit, apply_permutation
    from .state import basis_ket

    if q > 256:
        raise ValueError("state-vector tier is capped at Q = 256")
    oracle = PeriodicOracle.for_base(m, n)
    reg1_bits = q.bit_length() - 1
    reg2_bits = max((n - 1).bit_length(), 1)
    total_bits = reg1_bits + reg2_bits
    reg2_dim = 1 << reg2_bits

    xs, ys = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    fourier = Gate("QFT", np.exp(2j * math.pi * xs * ys / q) / math.sqrt(q))
    reg1_targets = tuple(range(reg2_bits, total_bits))

    # |x>|l> -> |x>|f(x) - l mod n>; basis states l >= n are fixed points.
    perm = []
    for x in range(q):
        fx = oracle(x)
        for ell in range(reg2_dim):
            out = (fx - ell) % n if ell < n else ell
            perm.append((x << reg2_bits) | out)

    state = basis_ket(total_bits, 0)
    pre = Circuit(total_bits, (CircuitStep(fourier, reg1_targets),))
    state = apply_circuit(pre, state)
    state = apply_permutation(perm, state)
    state = apply_circuit(pre, state)

    probs = np.abs(state.amplitudes.reshape(q, reg2_dim)) ** 2
    return probs.sum(axis=1)
