"""End-to-end perfect matching driver.

An absorbing matching is set aside, the rest is covered almost perfectly,
and the few uncovered vertices are absorbed.  If the cover engine instead
certifies that the host is close to the extremal example, the extremal
matcher takes over on the whole host.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil
from typing import Optional, Union

from .core import Hypergraph3, Matching, verify_matching
from .cover.absorb import absorb_leftover, build_absorbing_matching
from .cover.engine import almost_perfect_matching
from .cover.structures import AlmostPerfect, EngineParams, Extremal, Stalled
from .errors import AbsorptionFailed, EmptyGraph, HypermatchError, InvalidOrder
from .exact import PM, has_perfect_matching
from .extremal import extremal_perfect_matching, is_extremal_certificate

ABSORBING = "absorbing"
EXTREMAL = "extremal"
EXACT = "exact"


@dataclass(frozen=True)
class PipelineConfig:
    alpha: float = 0.3
    eta: Optional[float] = None  # defaults to alpha ** 1.5
    seed: int = 0
    fallback_exact: Optional[bool] = None  # defaults to n <= 24
    absorber_cap: Optional[int] = None
    probe_count: int = 100
    max_iterations: int = 1000
    exact_budget: int = 2_000_000

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if not 0 < self.eta_value <= self.alpha:
            raise ValueError("need 0 < eta <= alpha")

    @property
    def eta_value(self) -> float:
        return self.alpha**1.5 if self.eta is None else self.eta

    def use_fallback(self, n: int) -> bool:
        return n <= 24 if self.fallback_exact is None else self.fallback_exact

    def cap(self, n: int) -> int:
        if self.absorber_cap is not None:
            return self.absorber_cap
        return max(1, min(ceil(self.alpha**1.5 * n), n // 20))


@dataclass(frozen=True)
class PipelineSuccess:
    matching: Matching
    route: str  # absorbing | extremal | exact
    trace: dict = field(default_factory=dict)


@dataclass(frozen=True)
class StructuredFailure:
    stage: str
    message: str
    exact_status: Optional[str] = None  # pm | no-pm | undecided when the exact solver ran
    trace: dict = field(default_factory=dict)


def _lift(M: Matching, labels) -> Matching:
    return Matching(tuple(tuple(labels[v] for v in e) for e in M.edges))


def _heuristic(H: Hypergraph3, cfg: PipelineConfig, trace: dict) -> tuple[Optional[Matching], str, str]:
    """Returns ``(matching, route, "")`` or ``(None, stage, message)``."""
    eta = cfg.eta_value
    try:
        AM = build_absorbing_matching(H, cap=cfg.cap(H.n), probe_count=cfg.probe_count, seed=cfg.seed)
    except EmptyGraph as exc:
        return None, "absorbing", str(exc)
    rest = sorted(set(range(H.n)) - AM.M.covered)
    if len(rest) < 3:
        return _finish_absorbing(H, AM, Matching(), rest)
    Hr, labels = H.induced(rest)
    params = EngineParams(eta=eta, alpha=cfg.alpha, seed=cfg.seed, max_iterations=cfg.max_iterations)
    rows: list = []
    trace["cover"] = rows
    outcome = almost_perfect_matching(Hr, params, trace=rows)
    if isinstance(outcome, Extremal):
        B = frozenset(labels[v] for v in outcome.B)
        if not is_extremal_certificate(H, B, cfg.alpha):
            return None, "extremal-certificate", "sparse set found in the remainder is too small for the host"
        ext_rows: list = []
        trace["extremal"] = ext_rows
        try:
            M = extremal_perfect_matching(H, B, cfg.alpha, cfg.seed, trace=ext_rows)
        except HypermatchError as exc:
            return None, getattr(exc, "stage", "extremal"), str(exc)
        return M, EXTREMAL, ""
    assert isinstance(outcome, (AlmostPerfect, Stalled))
    partial = _lift(outcome.cover.matching(), labels)
    W = sorted(set(rest) - partial.covered)
    return _finish_absorbing(H, AM, partial, W)


def _finish_absorbing(H, AM, partial, W):
    try:
        M = absorb_leftover(H, AM, W, partial)
    except AbsorptionFailed as exc:
        return None, "absorb", str(exc)
    return M, ABSORBING, ""


def perfect_matching(H: Hypergraph3, cfg: PipelineConfig = PipelineConfig()) -> Union[PipelineSuccess, StructuredFailure]:
    """Perfect matching of ``H`` or a failure naming the stage that gave up.

    With the exact fallback enabled a failed heuristic run is settled by the
    exact solver; its verdict is carried in the failure when there is no PM.
    """
    if H.n % 3:
        raise InvalidOrder(f"n = {H.n} is not a multiple of 3")
    trace: dict = {}
    M, route, message = _heuristic(H, cfg, trace)
    if M is not None:
        verdict = verify_matching(H, M, perfect=True)
        if verdict:
            return PipelineSuccess(M.canonical(), route, trace)
        route, message = "verify", verdict.detail
    if not cfg.use_fallback(H.n):
        return StructuredFailure(route, message, None, trace)
    exact = has_perfect_matching(H, budget=cfg.exact_budget)
    if exact.status == PM:
        assert verify_matching(H, exact.witness, perfect=True)
        return PipelineSuccess(exact.witness.canonical(), EXACT, trace)
    return StructuredFailure(route, message, exact.status, trace)
