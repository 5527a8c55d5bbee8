"""Approximating functions psi: N -> [0, 1/2] and their hypothesis checks."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np


class Theorem(enum.Enum):
    KHINTCHINE = "khintchine"
    GALLAGHER = "gallagher"
    SCHMIDT = "schmidt"
    WANGYU = "wangyu"
    MAINTHM = "mainthm"
    FIBRETHM = "fibrethm"
    ABH = "abh"


HOLDS, FAILS, UNKNOWN = "holds", "fails", "unknown"


@dataclass(frozen=True)
class ApproxFunction:
    """A parametric or tabulated approximating function.

    ``family`` is one of ``"powerlog"``, ``"constant"`` or ``"table"``.

    * powerlog(c, kappa, a): ``min(1/2, c * n**-kappa * log(n+1)**-a)``
    * constant(c): ``c`` with ``0 <= c <= 1/2``
    * table(v1, v2, ...): ``v[n-1]``, clamped to [0, 1/2]; out of range is an error
    """

    family: str
    params: tuple = ()
    power_bounded_kappa: float | None = None

    def __post_init__(self):
        fam = self.family.lower()
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if fam == "powerlog":
            if len(self.params) != 3:
                raise ValueError("powerlog takes c, kappa, a")
            c, kappa, _ = self.params
            if c <= 0 or kappa < 0:
                raise ValueError("powerlog needs c > 0 and kappa >= 0")
        elif fam == "constant":
            if len(self.params) != 1 or not 0.0 <= self.params[0] <= 0.5:
                raise ValueError("constant takes one value in [0, 1/2]")
        elif fam == "table":
            if not self.params:
                raise ValueError("table needs at least one value")
            if any(v < 0 or not math.isfinite(v) for v in self.params):
                raise ValueError("table values must be finite and non-negative")
        else:
            raise ValueError(f"unknown psi family {self.family!r}")

    # flags -----------------------------------------------------------------

    @property
    def non_increasing(self) -> bool:
        if self.family == "constant":
            return True
        if self.family == "powerlog":
            return self.params[2] >= 0
        vals = np.minimum(np.asarray(self.params), 0.5)
        return bool(np.all(np.diff(vals) <= 0))

    @property
    def vanishing(self) -> bool:
        """psi(n) -> 0. Tables are finite, so this is decided on the last entry."""
        if self.family == "constant":
            return self.params[0] == 0.0
        if self.family == "powerlog":
            _, kappa, a = self.params
            return kappa > 0 or a > 0
        return self.params[-1] == 0.0

    @property
    def length(self) -> int | None:
        return len(self.params) if self.family == "table" else None

    def spec(self) -> str:
        return f"{self.family}:" + ",".join(repr(p) for p in self.params)

    # evaluation ------------------------------------------------------------

    def __call__(self, n):
        if np.ndim(n) == 0:
            return float(self.values(np.array([n]))[0])
        return self.values(np.asarray(n))

    def values(self, n: np.ndarray) -> np.ndarray:
        """Vectorised evaluation on an integer array with entries >= 1."""
        n = np.asarray(n)
        if n.size and n.min() < 1:
            raise ValueError("psi is defined on positive integers only")
        if self.family == "constant":
            return np.full(n.shape, self.params[0])
        if self.family == "table":
            if n.size and n.max() > len(self.params):
                raise IndexError(
                    f"table psi has {len(self.params)} entries, asked for n={int(n.max())}")
            return np.minimum(np.asarray(self.params)[n.astype(np.int64) - 1], 0.5)
        c, kappa, a = self.params
        x = n.astype(np.float64)
        v = c * x ** -kappa
        if a:
            v = v * np.log1p(x) ** -a
        return np.minimum(v, 0.5)


def parse_psi(text: str) -> ApproxFunction:
    """``family:p1,p2,...`` as used on the command line and in config files."""
    fam, _, rest = text.partition(":")
    params = tuple(float(p) for p in rest.split(",") if p.strip()) if rest else ()
    return ApproxFunction(fam.strip(), params)


def powerlog(c=1.0, kappa=1.0, a=0.0) -> ApproxFunction:
    return ApproxFunction("powerlog", (c, kappa, a))


def constant(c: float) -> ApproxFunction:
    return ApproxFunction("constant", (c,))


# classification -------------------------------------------------------------

@dataclass
class HypothesisReport:
    theorem: Theorem
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return FAILS not in self.checks.values()

    @property
    def violations(self) -> list:
        return [name for name, v in self.checks.items() if v == FAILS]


def growth_verdict(partial_sums: list[float]) -> str:
    """Judge divergence of a non-negative series from its sums at N/100, N/10, N.

    The decade increments are compared: a ratio near 1 or above means the
    series keeps growing (unbounded); a ratio well below 1 means geometric
    decay of the tail (bounded).
    """
    s0, s1, s2 = partial_sums
    d1, d2 = s1 - s0, s2 - s1
    if d2 <= 0 and d1 <= 0:
        return FAILS
    if d1 <= 0:
        return HOLDS
    q = d2 / d1
    if q >= 0.9:
        return HOLDS
    if q <= 0.5:
        return FAILS
    return UNKNOWN


def _series_terms(f: ApproxFunction, theorem: Theorem, k: int, n: np.ndarray) -> np.ndarray:
    from . import predictors

    psi = f.values(n)
    if theorem is Theorem.KHINTCHINE:
        return psi
    if theorem is Theorem.SCHMIDT:
        return (2 * psi) ** k
    if theorem is Theorem.WANGYU:
        return predictors.psi_times_terms(psi, k)
    if theorem is Theorem.ABH:
        phi = predictors.euler_phi_sieve(int(n[-1]))[n]
        return 2 * (phi / n) * psi
    # Gallagher, MainThm and FibreThm all hinge on sum psi(n) (log n)^(k-1)
    return psi * np.log(n) ** (k - 1)


def classify(f: ApproxFunction, theorem: Theorem | str, k: int = 2,
             kappa: float | None = None, probe_n: int = 10**6,
             scan_n: int = 10**6) -> HypothesisReport:
    """Report which hypotheses of ``theorem`` hold, fail or are undecided for f.

    Series divergence is probed numerically from partial sums up to
    ``probe_n``; monotonicity and power bounds are scanned up to ``scan_n``.
    """
    theorem = Theorem(theorem) if not isinstance(theorem, Theorem) else theorem
    rep = HypothesisReport(theorem)
    limit = min(scan_n, f.length) if f.length else scan_n
    n = np.arange(1, limit + 1)
    vals = f.values(n)

    clamped_at_1 = f.family == "powerlog" and f.params[0] * math.log(2) ** -f.params[2] > 0.5
    if clamped_at_1:
        rep.notes.append("psi(1) clamped to 1/2")
    elif f.family == "table" and np.any(np.asarray(f.params) > 0.5):
        rep.notes.append("table entries above 1/2 clamped")

    if theorem is not Theorem.ABH:
        scanned = bool(np.all(np.diff(vals) <= 0))
        rep.checks["non_increasing"] = HOLDS if scanned else FAILS

    if theorem is Theorem.WANGYU:
        rep.checks["psi_to_zero"] = HOLDS if f.vanishing else FAILS

    if theorem in (Theorem.MAINTHM, Theorem.FIBRETHM):
        kap = kappa if kappa is not None else f.power_bounded_kappa
        if kap is None or kap <= 0:
            rep.checks["power_bound"] = UNKNOWN
            rep.notes.append("no kappa > 0 supplied")
        else:
            below = vals < n.astype(np.float64) ** -kap
            rep.checks["power_bound"] = HOLDS if below.all() else FAILS
            if not below.all():
                rep.notes.append(f"psi(n) >= n^-{kap} first at n={int(np.argmin(below)) + 1}")
            elif clamped_at_1:
                rep.notes.append(f"psi(n) < n^-{kap} holds for n >= 2; n=1 is clamped")

    name = {
        Theorem.KHINTCHINE: "sum_psi_diverges",
        Theorem.GALLAGHER: "sum_psi_log_diverges",
        Theorem.SCHMIDT: "Psi_k_unbounded",
        Theorem.WANGYU: "Psi_k_times_unbounded",
        Theorem.MAINTHM: "Psi_tilde_unbounded",
        Theorem.FIBRETHM: "Psi_tilde_unbounded",
        Theorem.ABH: "Psi_abh_unbounded",
    }[theorem]
    top = min(probe_n, f.length) if f.length else probe_n
    if f.length is not None:
        rep.checks[name] = UNKNOWN
        rep.notes.append("finite table: divergence undecidable")
    elif top < 100:
        rep.checks[name] = UNKNOWN
    else:
        m = np.arange(1, top + 1)
        terms = _series_terms(f, theorem, k, m)
        if theorem is Theorem.WANGYU and np.any(terms < 0):
            rep.notes.append("Psi_k^x has negative terms where psi(n) > 2^-k")
        sums = [math.fsum(terms[: top // 100].tolist()),
                math.fsum(terms[: top // 10].tolist()),
                math.fsum(terms.tolist())]
        rep.checks[name] = growth_verdict(sums)
        rep.notes.append(f"{name}: partial sums {sums[0]:.6g}, {sums[1]:.6g}, {sums[2]:.6g} "
                         f"at N={top // 100}, {top // 10}, {top}")
    return rep
