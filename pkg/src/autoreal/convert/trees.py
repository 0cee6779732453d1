"""Pruned-output-tree machinery behind the transducer constructions.

Everything operates on a deterministic graph automaton through the small
protocol ``initial`` / ``step(state, (a, b))`` / ``is_accepting(state)``.
The frontier of the pruned tree at output level n is the set of labels
of surviving depth-n nodes; labels at one level are pairwise distinct by
the pruning rule, so a frozenset of labels is a faithful frontier.
"""

from __future__ import annotations

from typing import Hashable, Iterable


class DelayTooSmall(RuntimeError):
    """No accepting-label chain exists inside the lookahead window."""


class DelayCapExceeded(RuntimeError):
    pass


def state_key(q) -> tuple:
    """Deterministic ordering key for automaton states of either shape."""
    if isinstance(q, int):
        return (0, (q,))
    if isinstance(q, frozenset):
        return (1, tuple(sorted(q)))
    return (2, (repr(q),))


def prune_step(det, X: frozenset, a: int) -> frozenset:
    """Advance a frontier one level on input bit a.

    Children are the labels delta(k, (a, b)) for k in X and both output
    bits b; any label produced more than once is removed entirely (the
    colliding nodes die together).
    """
    counts: dict[Hashable, int] = {}
    for k in X:
        for b in (0, 1):
            t = det.step(k, (a, b))
            counts[t] = counts.get(t, 0) + 1
    out = frozenset(t for t, c in counts.items() if c == 1)
    if not out:
        raise DelayTooSmall("pruned frontier became empty; automaton does not "
                            "accept a total function's graph")
    return out


def reachable_frontiers(det) -> set[frozenset]:
    """All frontiers reachable from the root by input bits."""
    start = frozenset([det.initial])
    seen = {start}
    stack = [start]
    while stack:
        X = stack.pop()
        for a in (0, 1):
            Y = prune_step(det, X, a)
            if Y not in seen:
                seen.add(Y)
                stack.append(Y)
    return seen


def max_frontier_width(det) -> int:
    return max(len(X) for X in reachable_frontiers(det))


MIN_CHAIN_DEPTH = 4  # chain node lengths must exceed 3


class _Node:
    __slots__ = ("label", "path", "parent")

    def __init__(self, label, path, parent):
        self.label = label
        self.path = path
        self.parent = parent


def _expand_level(det, nodes: list[_Node], a: int) -> list[_Node]:
    cand: list[_Node] = []
    counts: dict[Hashable, int] = {}
    for node in nodes:
        for b in (0, 1):
            lab = det.step(node.label, (a, b))
            cand.append(_Node(lab, node.path + (b,), node))
            counts[lab] = counts.get(lab, 0) + 1
    return [n for n in cand if counts[n.label] == 1]


def _chain_count(node: _Node, depth: int) -> int:
    """Occurrences of node.label among ancestors at depths >= MIN_CHAIN_DEPTH."""
    count = 0
    lab = node.label
    cur, d = node, depth
    while cur is not None and d >= MIN_CHAIN_DEPTH:
        if cur.label == lab:
            count += 1
        cur, d = cur.parent, d - 1
    return count


def chain_gamma(det, window: tuple[int, ...], X: frozenset,
                chain_nodes: int) -> tuple[int, int]:
    """First two digits of the canonical accepting chain below frontier X.

    Searches the relative pruned tree along the window for a descending
    path carrying the same accepting label at ``chain_nodes`` distinct
    depths in (3, |window|); the canonical chain is the first one
    completed in (depth, path-lexicographic) order.  Raises
    :class:`DelayTooSmall` when no chain fits in the window.
    """
    D = len(window)
    level = [_Node(k, (), None) for k in sorted(X, key=state_key)]
    for depth in range(1, D):
        level = _expand_level(det, level, window[depth - 1])
        if depth < MIN_CHAIN_DEPTH:
            continue
        for node in level:  # expansion preserves path-lex order
            if det.is_accepting(node.label) and \
                    _chain_count(node, depth) >= chain_nodes:
                return (node.path[0], node.path[1])
    raise DelayTooSmall(
        f"no {chain_nodes}-node accepting chain within window of length {D}"
    )


def _worst_completion_depth(det, X: frozenset, chain_nodes: int,
                            depth_cap: int) -> int:
    """Max over windows of the least depth at which a chain completes.

    Depth-first over window bits with subtree pruning: once a chain has
    completed for a window prefix it stays completed for every
    extension, so the branch closes.  Raises when some window admits no
    chain within ``depth_cap`` levels.
    """
    worst = 0
    root = [_Node(k, (), None) for k in sorted(X, key=state_key)]
    frames: list[tuple[int, list[_Node]]] = [(0, root)]
    while frames:
        depth, nodes = frames.pop()
        for a in (0, 1):
            nxt = _expand_level(det, nodes, a)
            d = depth + 1
            done = False
            if d >= MIN_CHAIN_DEPTH:
                for node in nxt:
                    if det.is_accepting(node.label) and \
                            _chain_count(node, d) >= chain_nodes:
                        done = True
                        break
            if done:
                worst = max(worst, d)
            elif d >= depth_cap:
                raise DelayTooSmall(
                    f"window branch with no chain within {depth_cap} levels"
                )
            else:
                frames.append((d, nxt))
    return worst


def _least_delay(det, frontiers, chain_nodes: int, cap: int) -> int:
    worst = 0
    for X in sorted(frontiers, key=lambda s: tuple(sorted(map(state_key, s)))):
        worst = max(worst, _worst_completion_depth(det, X, chain_nodes, cap - 1))
    return worst + 1


def discover_delay(det, cap: int = 24, chain_nodes: int | None = None) -> tuple[int, int]:
    """Least D <= cap such that every reachable (window, frontier) pair
    admits the required accepting chain strictly inside the window.

    Returns (delay, chain_nodes).  The chain length defaults to 2N+1
    nodes, N the maximum reachable frontier width; when no delay under
    the cap supports that, it falls back to the minimal pumpable chain
    of 2 nodes (one repetition), whose claims the runtime monitors
    check.  The discovered delay is the least valid one, and validity
    is monotone in D since a completed chain survives window extension.
    """
    frontiers = reachable_frontiers(det)
    candidates = [chain_nodes] if chain_nodes is not None else None
    if candidates is None:
        width = max(len(X) for X in frontiers)
        candidates = [2 * width + 1, 2]
    last_err: Exception | None = None
    for nodes in candidates:
        try:
            return _least_delay(det, frontiers, nodes, cap), nodes
        except DelayTooSmall as e:
            last_err = e
    raise DelayCapExceeded(
        f"no delay under cap {cap} supports any candidate chain: {last_err}"
    )
