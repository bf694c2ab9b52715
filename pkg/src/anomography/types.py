"""Shared domain types and hyperparameters.

All types here are value objects: once constructed they are never mutated, so
they are safe to share across threads. Algorithms live elsewhere.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True)
class RoutingMatrix:
    """Binary link-flow incidence, stored sparse by column.

    ``flow_links[i]`` lists the directed links traversed by flow ``i``.
    Rows are directed links, columns are origin-destination flows.
    """

    num_links: int
    flow_links: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for i, links in enumerate(self.flow_links):
            for l in links:
                if not 0 <= l < self.num_links:
                    raise DimensionError(f"flow {i} references link {l} outside 0..{self.num_links - 1}")
        if self.num_links >= self.num_flows:
            warnings.warn(
                f"routing has L={self.num_links} >= F={self.num_flows}; "
                "not an under-constrained anomography instance",
                stacklevel=2,
            )

    @property
    def num_flows(self) -> int:
        return len(self.flow_links)

    def dense(self) -> np.ndarray:
        """Dense L x F float array (0/1 entries)."""
        mat = np.zeros((self.num_links, self.num_flows))
        for i, links in enumerate(self.flow_links):
            mat[list(links), i] = 1.0
        return mat

    def link_flows(self) -> tuple[tuple[int, ...], ...]:
        """Row view: flows traversing each link."""
        per_link: list[list[int]] = [[] for _ in range(self.num_links)]
        for i, links in enumerate(self.flow_links):
            for l in links:
                per_link[l].append(i)
        return tuple(tuple(f) for f in per_link)

    def apply(self, flow_values: np.ndarray) -> np.ndarray:
        """Link loads for the given per-flow volumes (columns may be time)."""
        flow_values = np.asarray(flow_values, dtype=float)
        out_shape = (self.num_links,) + flow_values.shape[1:]
        out = np.zeros(out_shape)
        for i, links in enumerate(self.flow_links):
            for l in links:
                out[l] += flow_values[i]
        return out


@dataclass(frozen=True)
class ObservedSlice:
    """One frontal slice of the Hankelized traffic tensor plus its mask.

    ``index`` is the 1-based slice index; column ``w`` holds the measurement
    at time ``index + w`` (0-based w). Entries where ``mask`` is 0 are zeroed
    and must never influence an estimate.
    """

    index: int
    values: np.ndarray  # L x W, zeros at unobserved positions
    mask: np.ndarray  # L x W in {0, 1}

    def __post_init__(self):
        if self.values.shape != self.mask.shape:
            raise DimensionError(f"values {self.values.shape} vs mask {self.mask.shape}")

    @property
    def num_links(self) -> int:
        return self.values.shape[0]

    @property
    def window(self) -> int:
        return self.values.shape[1]

    @property
    def newest_time(self) -> int:
        """Measurement time covered by the last column."""
        return self.index + self.window - 1


@dataclass
class CpModel:
    """Current CP factors: link factor A (L x R), window factor C (W x R),
    projection coefficients for the current and previous slice."""

    A: np.ndarray
    C: np.ndarray
    b: np.ndarray
    b_prev: np.ndarray

    @property
    def rank(self) -> int:
        return self.A.shape[1]

    def reconstruct(self) -> np.ndarray:
        """Slice reconstruction A diag(b) C^T."""
        return (self.A * self.b) @ self.C.T

    def copy(self) -> "CpModel":
        return CpModel(self.A.copy(), self.C.copy(), self.b.copy(), self.b_prev.copy())


@dataclass
class RlsState:
    """Discounted normal matrices for the recursive least-squares updates:
    one R x R system per link row and per window row."""

    link_grams: np.ndarray  # L x R x R
    window_grams: np.ndarray  # W x R x R

    def copy(self) -> "RlsState":
        return RlsState(self.link_grams.copy(), self.window_grams.copy())


@dataclass(frozen=True)
class Hyperparams:
    """Tracker and solver knobs; defaults follow the reference configuration."""

    rank: int = 10
    window: int = 24
    forgetting: float = 0.9
    ridge: float = 1e-3          # Frobenius / l2 weight on the factors
    hankel_weight: float = 1e-3  # coupling between successive slices
    sparsity_scale: float = 1e-2  # l1 weight as a fraction of max |residual|
    admm_penalty: float = 1.0
    admm_max_iter: int = 120
    admm_tol_abs: float = 1e-5
    admm_tol_rel: float = 1e-3
    detect_threshold: float = 0.5

    def violations(self) -> list[str]:
        out = []
        if not 0.0 < self.forgetting <= 1.0:
            out.append(f"forgetting factor out of range (0,1]: {self.forgetting}")
        if self.ridge < 0:
            out.append(f"ridge weight must be >= 0: {self.ridge}")
        if self.hankel_weight < 0:
            out.append(f"hankel weight must be >= 0: {self.hankel_weight}")
        if self.admm_penalty <= 0:
            out.append(f"admm penalty must be > 0: {self.admm_penalty}")
        if self.admm_max_iter < 1:
            out.append(f"admm max iterations must be >= 1: {self.admm_max_iter}")
        if self.window <= 1:
            out.append(f"window must exceed 1: {self.window}")
        if self.rank < 1:
            out.append(f"rank must be >= 1: {self.rank}")
        return out

    def with_updates(self, **kw) -> "Hyperparams":
        return replace(self, **kw)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


@dataclass
class AnomalyVector:
    """ADMM state for one abnormal-flow estimate.

    ``z`` is the sparse iterate reported as the estimate; ``v`` is the smooth
    iterate and ``u`` the scaled dual, both kept for warm starts.
    """

    v: np.ndarray
    z: np.ndarray
    u: np.ndarray

    @property
    def estimate(self) -> np.ndarray:
        return self.z

    @classmethod
    def zeros(cls, num_flows: int) -> "AnomalyVector":
        return cls(np.zeros(num_flows), np.zeros(num_flows), np.zeros(num_flows))

    def copy(self) -> "AnomalyVector":
        return AnomalyVector(self.v.copy(), self.z.copy(), self.u.copy())


STRUCTURES = ("one_to_one", "n_to_one", "all_ods_one_link")


@dataclass(frozen=True)
class AnomalyEvent:
    """A ground-truth (or detected) volume anomaly.

    ``ratio`` multiplies the underlying flow on the event's plateau (0 models
    an outage); ``rise``/``fall`` are the fractions of the duration spent
    ramping in and out.
    """

    flows: tuple[int, ...]
    start: int  # 1-based time index
    duration: int
    ratio: float
    rise: float = 0.0
    fall: float = 0.0
    structure: str = "one_to_one"

    def violations(self) -> list[str]:
        out = []
        if self.duration < 1:
            out.append(f"event duration must be >= 1: {self.duration}")
        if self.ratio < 0:
            out.append(f"event ratio must be >= 0: {self.ratio}")
        if not (0 <= self.rise < 0.5) or not (0 <= self.fall < 0.5):
            out.append(f"rise/fall ratios must lie in [0, 0.5): {self.rise}, {self.fall}")
        if self.rise + self.fall > 1:
            out.append(f"rise + fall exceed the duration: {self.rise} + {self.fall}")
        if self.structure not in STRUCTURES:
            out.append(f"unknown event structure: {self.structure!r}")
        if not self.flows:
            out.append("event targets no flows")
        return out


def validate(model: CpModel | None = None,
             routing: RoutingMatrix | None = None,
             hp: Hyperparams | None = None) -> list[str]:
    """Collect every invariant violation across the given objects.

    Returns an empty list when everything holds; never raises.
    """
    out: list[str] = []
    if model is not None:
        L, R = model.A.shape
        if model.C.shape[1] != R:
            out.append(f"factor rank mismatch: A has {R} columns, C has {model.C.shape[1]}")
        if model.b.shape != (R,) or model.b_prev.shape != (R,):
            out.append("projection coefficient length differs from rank")
        for name, arr in (("A", model.A), ("C", model.C), ("b", model.b), ("b_prev", model.b_prev)):
            if not np.all(np.isfinite(arr)):
                out.append(f"non-finite entries in factor {name}")
    if routing is not None:
        for i, links in enumerate(routing.flow_links):
            if len(links) == 0:
                out.append(f"flow {i} traverses no link")
        if model is not None and model.A.shape[0] != routing.num_links:
            out.append(f"link count mismatch: model has {model.A.shape[0]}, routing {routing.num_links}")
    if hp is not None:
        out.extend(hp.violations())
    return out
