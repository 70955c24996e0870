"""Deterministic generators and persistence for the three problem families.

All randomness flows through counter-based Philox streams keyed by the
instance seed, so identical parameters give bit-identical instances on any
platform.  Instances round-trip through JSON exactly (floats are encoded
with shortest round-trip repr).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from smoothgreed.objectives import (
    DiagMap,
    FeasibleSet,
    RankOneMap,
    StackedMap,
    Step,
    l_bound_lp,
    step_from_descriptor,
    theta_of_instance,
)

SCHEMA_VERSION = "v1"


@dataclass
class Instance:
    family: str
    params: dict
    steps: list
    extras: dict

    def to_jsonable(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "family": self.family,
            "params": self.params,
            "steps": [s.to_descriptor() for s in self.steps],
            "extras": self.extras,
        }

    def save(self, path: str):
        with open(path, "w") as fh:
            json.dump(self.to_jsonable(), fh)

    @staticmethod
    def from_jsonable(d: dict) -> "Instance":
        if d.get("version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported instance version {d.get('version')!r}")
        steps = [step_from_descriptor(s) for s in d["steps"]]
        return Instance(d["family"], d["params"], steps, d.get("extras", {}))

    @staticmethod
    def load(path: str) -> "Instance":
        with open(path) as fh:
            return Instance.from_jsonable(json.load(fh))


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed)))


def gen_adwords_triangular(n: int, phase_len: int) -> Instance:
    """Worst-case budgeted-allocation family with a known offline optimum.

    n unit budgets; n phases of phase_len arrivals.  Arrivals in phase i
    bid 1/phase_len on every advertiser still present; the set of bidders
    shrinks from the back, so a greedy that breaks ties toward low indices
    exhausts exactly the budgets about to leave the market.  Assigning
    phase i to the advertiser that disappears after it saturates all n
    budgets, so the offline optimum is exactly n.
    """
    if n < 1 or phase_len < 1:
        raise ValueError("gen_adwords_triangular: n and phase_len must be >= 1")
    bid = 1.0 / phase_len
    steps = []
    for phase in range(n):
        a = np.zeros(n)
        a[: n - phase] = bid
        step = Step(DiagMap(a), FeasibleSet("simplex", n))
        steps.extend([step] * phase_len)
    return Instance(
        "adwords_triangular",
        {"n": n, "phase_len": phase_len},
        steps,
        {"offline_opt": float(n), "theta": 1.0, "l": 1.0, "bid": bid},
    )


def gen_lp_random(n: int, m: int, k: int, density: float, seed: int) -> Instance:
    """Random online packing stream with attached penalty parameters."""
    if not 0.0 < density <= 1.0:
        raise ValueError("gen_lp_random: density must lie in (0, 1]")
    rng = _rng(seed)
    # Scale consumption so budgets bind around the stream's midpoint.
    scale = 2.0 / max(1, m)
    steps = []
    for _ in range(m):
        c = rng.uniform(0.3, 1.0, size=k)
        for _ in range(64):
            mask = rng.random(size=(n, k)) < density
            if mask.any(axis=0).all():
                break
        B = np.where(mask, rng.uniform(0.2, 1.0, size=(n, k)) * scale, 0.0)
        steps.append(Step(StackedMap(c, B), FeasibleSet("simplex", k)))
    theta = theta_of_instance(steps)
    l = l_bound_lp(steps)
    return Instance(
        "lp_random",
        {"n": n, "m": m, "k": k, "density": density, "seed": int(seed)},
        steps,
        {"theta": theta, "l": l},
    )


def gen_logdet_stream(n: int, m: int, b: float, source: str = "random_vectors",
                      seed: int = 0, edges=None) -> Instance:
    """Rank-one determinant stream: random directions or graph incidence.

    The graph source builds the base matrix from the Laplacian plus the
    all-ones rank-one term; the graph must be connected so the base is
    positive definite.  The penalty slope is set just above twice the
    reciprocal smallest eigenvalue of the base matrix.
    """
    rng = _rng(seed)
    if source == "random_vectors":
        A0 = np.eye(n)
        vecs = rng.normal(size=(m, n))
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    elif source == "graph_incidence":
        if edges is None:
            raise ValueError("graph_incidence source needs an edge list")
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        L0 = np.zeros((n, n))
        base_edges = edges["base"]
        for i, j in base_edges:
            L0[i, i] += 1.0
            L0[j, j] += 1.0
            L0[i, j] -= 1.0
            L0[j, i] -= 1.0
            parent[find(i)] = find(j)
        if len({find(i) for i in range(n)}) != 1:
            raise ValueError("gen_logdet_stream: base graph must be connected")
        A0 = L0 + np.ones((n, n))
        stream = edges["stream"]
        vecs = np.zeros((len(stream), n))
        for t, (i, j) in enumerate(stream):
            vecs[t, i] = 1.0
            vecs[t, j] = -1.0
        m = len(stream)
    else:
        raise ValueError(f"unknown source {source!r}")
    lam_min = float(np.linalg.eigvalsh(A0)[0])
    l = 2.0 / lam_min * (1.0 + 1e-6)
    steps = [Step(RankOneMap(vecs[t]), FeasibleSet("unit_interval")) for t in range(m)]
    return Instance(
        "logdet_stream",
        {"n": n, "m": m, "b": float(b), "source": source, "seed": int(seed)},
        steps,
        {"A0": A0.tolist(), "l": l, "lambda_min": lam_min,
         "theta": math.log1p(1.0 / n)},
    )
