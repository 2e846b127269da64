"""One-to-many matching with minimum and maximum quotas under a master list.

The engine is generic: "agents" propose-side players each end up with exactly
one "host", hosts hold between ``q_min`` and ``q_max`` agents, and every host
ranks agents by one shared master list. Provided here:

* ``mmq_match``      -- two-phase quota-respecting assignment; always returns
                        a feasible matching when the quota sums admit one.
* ``deferred_acceptance`` -- classical agent-proposing DA against the maximum
                        quotas only; may violate minimum quotas.
* ``verify``         -- feasibility, blocking pairs (two readings), and an
                        exhaustive Pareto-optimality check on small instances.
* ``enumerate_feasible`` -- brute-force oracle over all feasible matchings.

Agents and hosts are integer ids 0..M-1 and 0..N-1.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

DEFAULT_ENUMERATION_BUDGET = 10**6


class MatchingError(ValueError):
    """Structural problem with an instance or a matching."""


class InfeasibleInstanceError(MatchingError):
    """Quota sums leave no feasible assignment (sum q_min <= M <= sum q_max fails)."""


class EnumerationBudgetError(MatchingError):
    """The instance is too large for exhaustive enumeration."""


@dataclass(frozen=True)
class MatchingInstance:
    """A quota-constrained matching problem.

    ``agent_prefs[m]`` ranks host ids best-first; hosts missing from the list
    are unacceptable to that agent. ``master_list`` ranks agent ids best-first
    and is shared by every host. ``gated[m]``, when present, flags hosts that
    the assignment should avoid unless forced to meet a minimum quota; gated
    hosts stay in the preference order.
    """

    n_agents: int
    n_hosts: int
    agent_prefs: tuple[tuple[int, ...], ...]
    master_list: tuple[int, ...]
    q_min: tuple[int, ...]
    q_max: tuple[int, ...]
    gated: Optional[tuple[frozenset[int], ...]] = None

    def __post_init__(self) -> None:
        m, n = self.n_agents, self.n_hosts
        if m < 0 or n < 0:
            raise MatchingError("agent and host counts must be non-negative")
        if len(self.agent_prefs) != m:
            raise MatchingError(f"expected {m} preference lists, got {len(self.agent_prefs)}")
        if len(self.q_min) != n or len(self.q_max) != n:
            raise MatchingError("quota vectors must have one entry per host")
        for h, (lo, hi) in enumerate(zip(self.q_min, self.q_max)):
            if not 0 <= lo <= hi:
                raise MatchingError(f"host {h}: need 0 <= q_min <= q_max, got ({lo}, {hi})")
        if sorted(self.master_list) != list(range(m)):
            raise MatchingError("master list must be a permutation of all agents")
        for a, prefs in enumerate(self.agent_prefs):
            if len(set(prefs)) != len(prefs):
                raise MatchingError(f"agent {a}: preference list contains duplicates")
            if any(h < 0 or h >= n for h in prefs):
                raise MatchingError(f"agent {a}: preference list names an unknown host")
        if self.gated is not None:
            if len(self.gated) != m:
                raise MatchingError("gated sets must have one entry per agent")
            for a, g in enumerate(self.gated):
                if not g <= set(self.agent_prefs[a]):
                    raise MatchingError(f"agent {a}: gated host not on preference list")
        if sum(self.q_min) > m or m > sum(self.q_max):
            raise InfeasibleInstanceError(
                f"no feasible matching: sum q_min={sum(self.q_min)}, "
                f"M={m}, sum q_max={sum(self.q_max)}"
            )

    def pref_ranks(self) -> list[dict[int, int]]:
        """Per-agent map host -> position in the preference list (0 is best)."""
        return [{h: i for i, h in enumerate(p)} for p in self.agent_prefs]

    def ml_ranks(self) -> list[int]:
        """Per-agent master-list position (0 is best)."""
        ranks = [0] * self.n_agents
        for i, a in enumerate(self.master_list):
            ranks[a] = i
        return ranks

    def is_gated(self, agent: int, host: int) -> bool:
        return self.gated is not None and host in self.gated[agent]


@dataclass(frozen=True)
class Matching:
    """An assignment: per-agent host (or None), per-host agent sets, loads."""

    agent_to_host: tuple[Optional[int], ...]
    host_to_agents: tuple[tuple[int, ...], ...]
    loads: tuple[int, ...]


def build_matching(assignment: Sequence[Optional[int]], n_hosts: int) -> Matching:
    """Construct a consistent Matching from a per-agent host list."""
    hosts: list[list[int]] = [[] for _ in range(n_hosts)]
    for agent, host in enumerate(assignment):
        if host is None:
            continue
        if not 0 <= host < n_hosts:
            raise MatchingError(f"agent {agent} assigned to unknown host {host}")
        hosts[host].append(agent)
    return Matching(
        agent_to_host=tuple(assignment),
        host_to_agents=tuple(tuple(h) for h in hosts),
        loads=tuple(len(h) for h in hosts),
    )


def _best_listed_host(
    instance: MatchingInstance,
    agent: int,
    admissible,
    respect_gating: bool = True,
) -> Optional[int]:
    # First pass honors the gates; callers fall back to a second pass without
    # them so that an agent is never stranded by the soft constraint.
    if respect_gating and instance.gated is not None:
        for h in instance.agent_prefs[agent]:
            if admissible(h) and not instance.is_gated(agent, h):
                return h
    for h in instance.agent_prefs[agent]:
        if admissible(h):
            return h
    return None


def mmq_match(instance: MatchingInstance) -> Matching:
    """Two-phase master-list assignment honoring minimum and maximum quotas.

    Phase 1 walks the master list and gives each agent its most preferred
    host with spare capacity, but only while the number of unassigned agents
    exceeds the total unmet minimum quota. Phase 2 assigns everyone left, in
    master-list order, to their most preferred host whose minimum quota is
    still unmet. Gated hosts are skipped in both phases unless an agent has
    no ungated option, in which case the gate yields to feasibility.

    The result is feasible, stable, and Pareto optimal for the agents
    (``verify`` checks all three).
    """
    m_count, n_count = instance.n_agents, instance.n_hosts
    loads = [0] * n_count
    assignment: list[Optional[int]] = [None] * m_count
    deficit = sum(instance.q_min)  # total unmet minimum quota
    order = instance.master_list

    pos = 0
    while pos < m_count and (m_count - pos) > deficit:
        agent = order[pos]
        host = _best_listed_host(instance, agent, lambda h: loads[h] < instance.q_max[h])
        if host is None:
            raise MatchingError(
                f"agent {agent} ranks no host with spare capacity; "
                "preference list is too short for this instance"
            )
        if loads[host] < instance.q_min[host]:
            deficit -= 1
        loads[host] += 1
        assignment[agent] = host
        pos += 1

    for agent in order[pos:]:
        host = _best_listed_host(instance, agent, lambda h: loads[h] < instance.q_min[h])
        if host is None:
            raise MatchingError(
                f"agent {agent} ranks no host with an unmet minimum quota; "
                "preference list is too short for this instance"
            )
        loads[host] += 1
        assignment[agent] = host

    return build_matching(assignment, n_count)


def deferred_acceptance(instance: MatchingInstance) -> Matching:
    """Agent-proposing deferred acceptance against the maximum quotas.

    Hosts rank proposers by the master list and hold at most ``q_max``
    tentative agents. Minimum quotas and gates play no role, so the result
    can be infeasible for instances with binding minima; run ``verify`` to
    find out.
    """
    ml_rank = instance.ml_ranks()
    next_choice = [0] * instance.n_agents
    held: list[list[int]] = [[] for _ in range(instance.n_hosts)]
    free = deque(instance.master_list)

    while free:
        agent = free.popleft()
        if next_choice[agent] >= len(instance.agent_prefs[agent]):
            continue  # exhausted every listed host; stays unmatched
        host = instance.agent_prefs[agent][next_choice[agent]]
        next_choice[agent] += 1
        if len(held[host]) < instance.q_max[host]:
            held[host].append(agent)
            continue
        if not held[host]:
            free.append(agent)  # q_max == 0
            continue
        worst = max(held[host], key=lambda a: ml_rank[a])
        if ml_rank[agent] < ml_rank[worst]:
            held[host].remove(worst)
            held[host].append(agent)
            free.append(worst)
        else:
            free.append(agent)

    assignment: list[Optional[int]] = [None] * instance.n_agents
    for host, agents in enumerate(held):
        for agent in agents:
            assignment[agent] = host
    return build_matching(assignment, instance.n_hosts)


@dataclass(frozen=True)
class VerifierReport:
    """Feasibility, blocking pairs under both readings, Pareto optimality.

    ``blocking_pairs`` uses the capacity-aware reading: an agent also blocks
    with a strictly preferred host that has a free slot, provided leaving its
    current host would not break that host's minimum quota. ``blocking_pairs_literal``
    counts only envy pairs, where the preferred host holds a master-list-worse
    agent. ``pareto_optimal`` is None when the matching is infeasible or the
    instance exceeds the enumeration budget.
    """

    feasible: bool
    blocking_pairs: tuple[tuple[int, int], ...]
    blocking_pairs_literal: tuple[tuple[int, int], ...]
    pareto_optimal: Optional[bool] = None


def _check_consistency(instance: MatchingInstance, matching: Matching) -> None:
    if len(matching.agent_to_host) != instance.n_agents:
        raise MatchingError("matching covers the wrong number of agents")
    if len(matching.host_to_agents) != instance.n_hosts or len(matching.loads) != instance.n_hosts:
        raise MatchingError("matching covers the wrong number of hosts")
    seen: set[int] = set()
    for host, agents in enumerate(matching.host_to_agents):
        if len(agents) != matching.loads[host]:
            raise MatchingError(f"host {host}: load does not equal its agent count")
        for agent in agents:
            if matching.agent_to_host[agent] != host:
                raise MatchingError(f"agent {agent} and host {host} disagree on the pairing")
            if agent in seen:
                raise MatchingError(f"agent {agent} appears under two hosts")
            seen.add(agent)
    for agent, host in enumerate(matching.agent_to_host):
        if host is not None and agent not in matching.host_to_agents[host]:
            raise MatchingError(f"agent {agent} missing from host {host}'s set")


def _blocking_pairs(
    instance: MatchingInstance, matching: Matching
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    ml_rank = instance.ml_ranks()
    pref_ranks = instance.pref_ranks()
    # Worst (largest) master-list rank currently held by each host.
    worst_held = [
        max((ml_rank[a] for a in agents), default=None)
        for agents in matching.host_to_agents
    ]
    capacity_aware: list[tuple[int, int]] = []
    literal: list[tuple[int, int]] = []
    for agent in range(instance.n_agents):
        current = matching.agent_to_host[agent]
        current_rank = (
            pref_ranks[agent].get(current, len(instance.agent_prefs[agent]))
            if current is not None
            else len(instance.agent_prefs[agent])
        )
        for host in instance.agent_prefs[agent][:current_rank]:
            if instance.is_gated(agent, host):
                continue  # the agent itself ruled this host out
            envy = worst_held[host] is not None and ml_rank[agent] < worst_held[host]
            if envy:
                literal.append((agent, host))
                capacity_aware.append((agent, host))
            elif matching.loads[host] < instance.q_max[host]:
                leaves_feasible = current is None or (
                    matching.loads[current] > instance.q_min[current]
                )
                if leaves_feasible:
                    capacity_aware.append((agent, host))
    return capacity_aware, literal


def enumerate_feasible(
    instance: MatchingInstance, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> Iterator[Matching]:
    """Yield every feasible matching exactly once (brute-force oracle).

    Feasible means every agent is assigned to a host on its list and all
    quota bounds hold. Refuses instances with more than ``budget`` raw
    assignments to scan.
    """
    if instance.n_hosts**instance.n_agents > budget:
        raise EnumerationBudgetError(
            f"{instance.n_hosts}^{instance.n_agents} assignments exceed the "
            f"budget of {budget}"
        )
    loads = [0] * instance.n_hosts
    assignment: list[Optional[int]] = [None] * instance.n_agents
    deficit = sum(instance.q_min)

    def recurse(agent: int) -> Iterator[Matching]:
        nonlocal deficit
        if agent == instance.n_agents:
            if deficit == 0:
                yield build_matching(assignment, instance.n_hosts)
            return
        remaining = instance.n_agents - agent
        if deficit > remaining:
            return  # not enough agents left to meet the minima
        for host in sorted(instance.agent_prefs[agent]):
            if loads[host] >= instance.q_max[host]:
                continue
            below_min = loads[host] < instance.q_min[host]
            loads[host] += 1
            if below_min:
                deficit -= 1
            assignment[agent] = host
            yield from recurse(agent + 1)
            assignment[agent] = None
            loads[host] -= 1
            if below_min:
                deficit += 1

    yield from recurse(0)


def _is_feasible(instance: MatchingInstance, matching: Matching) -> bool:
    if any(h is None for h in matching.agent_to_host):
        return False
    return all(
        instance.q_min[h] <= matching.loads[h] <= instance.q_max[h]
        for h in range(instance.n_hosts)
    )


def _pareto_optimal(instance: MatchingInstance, matching: Matching, budget: int) -> bool:
    pref_ranks = instance.pref_ranks()
    # Hosts not on an agent's list rank below everything it did list.
    ranks = [
        pref_ranks[a].get(matching.agent_to_host[a], len(instance.agent_prefs[a]))
        for a in range(instance.n_agents)
    ]
    for other in enumerate_feasible(instance, budget=budget):
        other_ranks = [
            pref_ranks[a][other.agent_to_host[a]] for a in range(instance.n_agents)
        ]
        if all(o <= r for o, r in zip(other_ranks, ranks)) and any(
            o < r for o, r in zip(other_ranks, ranks)
        ):
            return False
    return True


def verify(
    instance: MatchingInstance,
    matching: Matching,
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> VerifierReport:
    """Check feasibility, enumerate blocking pairs, and (when the instance is
    small enough) decide Pareto optimality by exhaustive comparison.

    Pairs the agent gated out are never counted as blocking; the agent
    declared the host inadmissible itself. The Pareto check runs only for
    feasible matchings on instances within the enumeration budget.
    """
    _check_consistency(instance, matching)
    feasible = _is_feasible(instance, matching)
    capacity_aware, literal = _blocking_pairs(instance, matching)
    pareto: Optional[bool] = None
    if feasible and instance.n_hosts**instance.n_agents <= enumeration_budget:
        pareto = _pareto_optimal(instance, matching, enumeration_budget)
    return VerifierReport(
        feasible=feasible,
        blocking_pairs=tuple(capacity_aware),
        blocking_pairs_literal=tuple(literal),
        pareto_optimal=pareto,
    )


def format_instance(instance: MatchingInstance) -> str:
    """Serialize to the plain-text exchange format.

    Line 1: ``M N``. Line 2: the N minimum quotas. Line 3: the N maximum
    quotas. Then M preference lines (host ids, best first) and one final
    line with the master list (agent ids, best first). Gates are not part
    of the format.
    """
    lines = [
        f"{instance.n_agents} {instance.n_hosts}",
        " ".join(str(q) for q in instance.q_min),
        " ".join(str(q) for q in instance.q_max),
    ]
    lines.extend(" ".join(str(h) for h in prefs) for prefs in instance.agent_prefs)
    lines.append(" ".join(str(a) for a in instance.master_list))
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> MatchingInstance:
    """Parse the plain-text exchange format written by ``format_instance``."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise MatchingError("empty instance file")
    try:
        m, n = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise MatchingError(f"bad header line {lines[0]!r}") from exc
    if len(lines) != 4 + m:
        raise MatchingError(f"expected {4 + m} lines for M={m}, got {len(lines)}")
    q_min = tuple(int(tok) for tok in lines[1].split())
    q_max = tuple(int(tok) for tok in lines[2].split())
    prefs = tuple(tuple(int(tok) for tok in lines[3 + i].split()) for i in range(m))
    master = tuple(int(tok) for tok in lines[3 + m].split())
    return MatchingInstance(
        n_agents=m, n_hosts=n, agent_prefs=prefs,
        master_list=master, q_min=q_min, q_max=q_max,
    )
