"""Shared test utilities: random instance generation for the matching engine."""

import numpy as np

from cellassoc.matching import MatchingInstance


def random_feasible_instance(
    rng: np.random.Generator, max_agents: int = 6, max_hosts: int = 3
) -> MatchingInstance:
    """Random complete-list instance with quota sums that admit a solution."""
    m = int(rng.integers(1, max_agents + 1))
    n = int(rng.integers(1, max_hosts + 1))
    prefs = tuple(tuple(int(h) for h in rng.permutation(n)) for _ in range(m))
    master = tuple(int(a) for a in rng.permutation(m))
    while True:
        q_max = rng.integers(1, m + 1, size=n)
        if q_max.sum() >= m:
            break
    while True:
        q_min = np.array([rng.integers(0, hi + 1) for hi in q_max])
        if q_min.sum() <= m:
            break
    return MatchingInstance(
        n_agents=m,
        n_hosts=n,
        agent_prefs=prefs,
        master_list=master,
        q_min=tuple(int(q) for q in q_min),
        q_max=tuple(int(q) for q in q_max),
    )
