"""Deterministic message-passing simulation of the distributed pipeline.

Nodes are the vertices of the 1-skeleton.  A transmission is either a
broadcast (one send, delivered to every neighbor) or a unicast to one
neighbor; each transmission is charged once to its sender under a phase
label, each delivery once to the receiver, and real-valued payload entries
are counted separately.  Events are processed in (time, sender id,
sequence, receiver id) order.  Synchronous scheduling delivers every
message one round after it is sent; async-deterministic scheduling draws
per-delivery delays from the seeded stream with FIFO clamping per directed
link, so a fixed seed reproduces the identical run and transcript.

Edge ownership: an edge is simulated on its higher-id endpoint.  During
relaxation every owner broadcasts one value per owned edge per round, so
the charge is owned_edges x iterations broadcasts per node, and consumes
the neighboring edge values it heard; values two hops away travel through
the shared vertex without extra charge.  The relaxation rounds execute in
lockstep through the same sweep kernel as the centralized path, which
makes the iterates bit-identical to it; message counts for these rounds
are exact but tallied per round rather than replayed one event at a time,
and the same goes for the periodic residual convergecast up the tree and
the stop broadcast down, charged under their own phase label.

Relaxation is always round-synchronous, including under async scheduling;
the async delays apply to the gossip, tree, potential, prune, selection
and report phases.  Pruned nodes keep relaxing the edges they own, since
the iteration needs the whole complex, but drop out of every later tree
phase.  Two modeling grants are taken: cycle hop lengths are read off the
globally known tree rather than carried by an extra protocol, and output
chains are materialized from the tree after the run; neither adds charged
messages.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass

import numpy as np

from . import kernels
from .complex import SimplicialComplex2, build_boundaries, build_laplacian
from .cyclebasis import (
    CycleRecord,
    GeneratorSet,
    PipelineConfig,
    PipelineResult,
    SpanningTree,
    classify_cycles,
    cycle_from_nontree_edge,
    cycle_integral,
    derive_seeds,
    nontree_edges,
    partition_homologous,
    reduce_to_generators,
    select_representatives,
)
from .errors import MaxIterationsExceeded, NonQuiescent
from .harmonic import HarmonicResult, default_max_iterations, initial_vector
from .rng import SplitMix64

log = logging.getLogger(__name__)

BROADCAST = -1


@dataclass
class SimConfig:
    """Scheduling and bookkeeping knobs for one simulated run."""

    scheduling: str = "sync"          # "sync" | "async"
    seed: int = 0                     # drives async delay draws
    delay_spread: int = 3             # async delays are 1 + draw(spread)
    residual_check_period: int = 1    # rounds between termination checks
    max_events: int = 50_000_000      # NonQuiescent guard
    transcript: bool = False          # record line-per-message text
    collect_iterates: bool = False    # keep every relaxation iterate

    def __post_init__(self):
        if self.scheduling not in ("sync", "async"):
            raise ValueError(f"unknown scheduling '{self.scheduling}'")
        if self.delay_spread < 1:
            raise ValueError("delay_spread must be at least 1")
        if self.residual_check_period < 1:
            raise ValueError("residual_check_period must be at least 1")
        if self.max_events < 1:
            raise ValueError("max_events must be at least 1")


@dataclass
class Message:
    """One transmission; dst == BROADCAST means every 1-skeleton neighbor."""

    src: int
    dst: int
    phase: str
    kind: str
    payload: tuple = ()
    floats: int = 0


class CostReport:
    """Per-phase, per-node transmission accounting.

    broadcasts counts transmissions by the sender, one per broadcast or
    unicast alike; packets_received counts delivery events; payload_floats
    counts real-valued payload entries sent.
    """

    def __init__(self, node_count: int):
        self.node_count = node_count
        self.phases: dict[str, dict[str, np.ndarray]] = {}
        self.sent: dict[str, int] = {}
        self.expected: dict[str, int] = {}
        self.delivered: dict[str, int] = {}
        self.transcript: list[str] = []

    def _block(self, phase: str):
        block = self.phases.get(phase)
        if block is None:
            block = {
                "broadcasts": np.zeros(self.node_count, dtype=np.int64),
                "packets_received": np.zeros(self.node_count, dtype=np.int64),
                "payload_floats": np.zeros(self.node_count, dtype=np.int64),
            }
            self.phases[phase] = block
            self.sent[phase] = 0
            self.expected[phase] = 0
            self.delivered[phase] = 0
        return block

    def charge_send(self, phase: str, node: int, floats: int, fanout: int):
        block = self._block(phase)
        block["broadcasts"][node] += 1
        block["payload_floats"][node] += floats
        self.sent[phase] += 1
        self.expected[phase] += fanout

    def charge_recv(self, phase: str, node: int):
        block = self._block(phase)
        block["packets_received"][node] += 1
        self.delivered[phase] += 1

    def bulk_charge(self, phase: str, sends, floats, recvs):
        """Aggregated per-node charges for one lockstep relaxation round."""
        block = self._block(phase)
        block["broadcasts"] += sends
        block["payload_floats"] += floats
        block["packets_received"] += recvs
        self.sent[phase] += int(np.sum(sends))
        self.expected[phase] += int(np.sum(recvs))
        self.delivered[phase] += int(np.sum(recvs))

    def assert_conserved(self):
        """Every transmission reached its full audience."""
        for phase in self.phases:
            if self.expected[phase] != self.delivered[phase]:
                raise NonQuiescent(
                    f"phase {phase}: expected {self.expected[phase]} deliveries, "
                    f"saw {self.delivered[phase]}"
                )

    def total(self, phase: str, counter: str = "broadcasts") -> int:
        block = self.phases.get(phase)
        return int(np.sum(block[counter])) if block else 0

    def node_total(self, phase: str, node: int, counter: str = "broadcasts") -> int:
        block = self.phases.get(phase)
        return int(block[counter][node]) if block else 0

    def grand_total(self, counter: str = "broadcasts") -> int:
        return sum(self.total(phase, counter) for phase in self.phases)

    def rows(self):
        """(phase, node_id, broadcasts, packets_received, payload_floats)."""
        out = []
        for phase in sorted(self.phases):
            block = self.phases[phase]
            for node in range(self.node_count):
                out.append(
                    (
                        phase,
                        node,
                        int(block["broadcasts"][node]),
                        int(block["packets_received"][node]),
                        int(block["payload_floats"][node]),
                    )
                )
        return out

    def to_csv_text(self) -> str:
        lines = ["phase,node_id,broadcasts,packets_received,payload_floats"]
        for row in self.rows():
            lines.append(",".join(str(x) for x in row))
        return "\n".join(lines) + "\n"


class _Sim:
    """Event queue, delay model and charging for one simulated run."""

    def __init__(self, complex_: SimplicialComplex2, cfg: SimConfig,
                 cost: CostReport | None = None):
        self.K = complex_
        self.cfg = cfg
        self.cost = cost or CostReport(complex_.vertex_count)
        self.time = 0
        self.seq = 0
        self.queue: list = []
        self.delay_stream = SplitMix64(cfg.seed)
        self.last_arrival: dict[tuple[int, int], int] = {}
        self.transcript: list[str] = []
        self.cost.transcript = self.transcript
        self.events_processed = 0

    def _arrival(self, src: int, dst: int, now: int) -> int:
        if self.cfg.scheduling == "sync":
            return now + 1
        raw = now + 1 + self.delay_stream.next_below(self.cfg.delay_spread)
        key = (src, dst)
        t = max(raw, self.last_arrival.get(key, 0))
        self.last_arrival[key] = t
        return t

    def send(self, src: int, dst: int, phase: str, kind: str,
             payload: tuple = (), floats: int = 0):
        """Schedule one transmission from src at the current time."""
        msg = Message(src=src, dst=dst, phase=phase, kind=kind,
                      payload=payload, floats=floats)
        targets = self.K.neighbors[src] if dst == BROADCAST else (dst,)
        self.cost.charge_send(phase, src, floats, len(targets))
        now = self.time
        self.seq += 1
        seq = self.seq
        for recv in targets:
            heapq.heappush(self.queue, (self._arrival(src, recv, now), src, seq, recv, msg))
        if self.cfg.transcript:
            where = "*" if dst == BROADCAST else str(dst)
            body = " ".join(repr(x) for x in payload)
            self.transcript.append(f"t={now} {src}->{where} {phase} {kind} {body}".rstrip())

    def drain(self, handler):
        """Process deliveries in deterministic order until quiescent."""
        while self.queue:
            t, src, _seq, recv, msg = heapq.heappop(self.queue)
            self.time = t
            self.events_processed += 1
            if self.events_processed > self.cfg.max_events:
                raise NonQuiescent(
                    f"event budget {self.cfg.max_events} exhausted in phase {msg.phase}"
                )
            self.cost.charge_recv(msg.phase, recv)
            handler(recv, msg)


def _gossip_max(sim: _Sim, phase: str, initial: dict[int, float]) -> dict[int, float]:
    """Max consensus: every node announces once, improvements rebroadcast."""
    best = dict(initial)
    for v in sorted(best):
        sim.send(v, BROADCAST, phase, "MaxGossip", (best[v],), floats=1)

    def handler(recv, msg):
        value = msg.payload[0]
        if value > best[recv]:
            best[recv] = value
            sim.send(recv, BROADCAST, phase, "MaxGossip", (value,), floats=1)

    sim.drain(handler)
    top = max(best.values())
    if any(v != top for v in best.values()):
        raise NonQuiescent("gossip drained before reaching consensus")
    return best


def run_max_gossip(complex_: SimplicialComplex2, initial: dict[int, float],
                   sim_cfg: SimConfig | None = None):
    """Distributed max over per-node values; returns (value, CostReport)."""
    sim = _Sim(complex_, sim_cfg or SimConfig())
    best = _gossip_max(sim, "gossip", initial)
    sim.cost.assert_conserved()
    return max(best.values()), sim.cost


class _TreeState:
    """Parent/children/hop tables built by the probe protocol."""

    def __init__(self, n: int, root: int):
        self.root = root
        self.parent: dict[int, int | None] = {root: None}
        self.hop = {root: 0}
        self.children: dict[int, set] = {v: set() for v in range(n)}


def _spanning_tree(sim: _Sim, state: _TreeState, phase: str, ack_phase: str):
    """Probe flood with strict hop improvement.

    Simultaneous arrivals are processed in ascending sender order, so under
    synchronous scheduling ties resolve to the smallest neighbor id and
    every node broadcasts exactly once.  Under async scheduling a node may
    improve several times; it retracts itself from the stale parent each
    time, and quiesces at its true hop distance.
    """
    sim.send(state.root, BROADCAST, phase, "TreeProbe", (0,))

    def handler(recv, msg):
        if msg.kind == "TreeProbe":
            cand = msg.payload[0] + 1
            known = state.hop.get(recv)
            if known is None or cand < known:
                old = state.parent.get(recv)
                if old is not None:
                    sim.send(recv, old, ack_phase, "ChildRetract", (recv,))
                state.hop[recv] = cand
                state.parent[recv] = msg.src
                sim.send(recv, msg.src, ack_phase, "ChildAck", (recv,))
                sim.send(recv, BROADCAST, phase, "TreeProbe", (cand,))
        elif msg.kind == "ChildAck":
            state.children[recv].add(msg.payload[0])
        elif msg.kind == "ChildRetract":
            state.children[recv].discard(msg.payload[0])

    sim.drain(handler)


def _tree_from_state(complex_: SimplicialComplex2, state: _TreeState) -> SpanningTree:
    n = complex_.vertex_count
    parent = np.full(n, -1, dtype=np.int32)
    hop = np.full(n, -1, dtype=np.int32)
    parent_edge = np.full(n, -1, dtype=np.int32)
    for v, p in state.parent.items():
        if p is not None:
            parent[v] = p
            parent_edge[v] = complex_.edge_id(v, p)
    for v, h in state.hop.items():
        hop[v] = h
    is_tree = np.zeros(complex_.edge_count, dtype=bool)
    for v in range(n):
        if parent_edge[v] >= 0:
            is_tree[parent_edge[v]] = True
    order = sorted(range(n), key=lambda v: (int(hop[v]), v))
    return SpanningTree(
        root=state.root, parent=parent, hop=hop, parent_edge=parent_edge,
        is_tree_edge=is_tree, order=np.asarray(order, dtype=np.int32),
    )


def run_spanning_tree(complex_: SimplicialComplex2, root: int,
                      sim_cfg: SimConfig | None = None):
    """Distributed spanning tree from root; returns (SpanningTree, CostReport)."""
    sim = _Sim(complex_, sim_cfg or SimConfig())
    state = _TreeState(complex_.vertex_count, root)
    _spanning_tree(sim, state, "tree", "tree_ack")
    sim.cost.assert_conserved()
    return _tree_from_state(complex_, state), sim.cost


def _edge_owners(complex_: SimplicialComplex2) -> np.ndarray:
    """Owner (higher endpoint) per edge."""
    return np.asarray([j for _i, j in complex_.edges], dtype=np.int64)


class _HarmonicPhase:
    """Lockstep relaxation rounds with periodic residual convergecasts.

    Charging is static: per round each owner broadcasts once per owned
    edge, heard by the owners of the edges coupled to it through the
    matrix; per check each non-root node sends one residual packet up the
    full tree, and on the stopping check root and internal nodes broadcast
    the stop signal down.
    """

    def __init__(self, sim: _Sim, complex_: SimplicialComplex2, lap,
                 tree: SpanningTree, delta: float, epsilon: float, max_iters: int):
        self.sim = sim
        self.K = complex_
        self.lap = lap
        self.tree = tree
        self.delta = delta
        self.epsilon = epsilon
        self.max_iters = max_iters
        self.threshold = epsilon * delta
        self.owners = _edge_owners(complex_)

        n = complex_.vertex_count
        self.sends = np.zeros(n, dtype=np.int64)
        self.recvs = np.zeros(n, dtype=np.int64)
        for e in range(complex_.edge_count):
            self.sends[self.owners[e]] += 1
            cols, _vals = lap.row(e)
            listeners = {int(self.owners[g]) for g in cols if g != e}
            listeners.discard(int(self.owners[e]))
            for w in listeners:
                self.recvs[w] += 1

        self.depth = int(tree.hop.max()) if n else 0
        self.ups = np.zeros(n, dtype=np.int64)
        self.downs = np.zeros(n, dtype=np.int64)
        has_child = np.zeros(n, dtype=bool)
        for v in range(n):
            p = int(tree.parent[v])
            if p >= 0:
                self.ups[v] = 1
                has_child[p] = True
        for v in range(n):
            if v == tree.root or has_child[v]:
                self.downs[v] = 1

    def _charge_round(self, y):
        sim = self.sim
        sim.cost.bulk_charge("harmonic", self.sends, self.sends, self.recvs)
        if sim.cfg.transcript:
            for e in range(self.K.edge_count):
                o = int(self.owners[e])
                sim.transcript.append(
                    f"t={sim.time} {o}->* harmonic HarmonicY {e} {y[e]!r}"
                )
        sim.time += 1

    def _charge_residual(self, worst: float, stopping: bool):
        sim = self.sim
        downs = self.downs if stopping else np.zeros_like(self.downs)
        floats = self.ups * 2 + downs
        sim.cost.bulk_charge("residual", self.ups + downs, floats, self.ups + downs)
        if sim.cfg.transcript:
            for v in range(self.K.vertex_count):
                if self.ups[v]:
                    p = int(self.tree.parent[v])
                    sim.transcript.append(
                        f"t={sim.time} {v}->{p} residual ResidualUp {worst!r}"
                    )
                if downs[v]:
                    sim.transcript.append(
                        f"t={sim.time} {v}->* residual TerminateBroadcast"
                    )
        sim.time += 2 * self.depth + 2

    def run(self, y0: np.ndarray):
        """Relax y0 to quiescence; returns (HarmonicResult, history or None)."""
        sim = self.sim
        period = sim.cfg.residual_check_period
        y = np.array(y0, dtype=np.float64, copy=True)
        work = np.empty_like(y)
        history = [y.copy()] if sim.cfg.collect_iterates else None
        it = 0
        worst = np.inf
        converged = False
        while it < self.max_iters:
            worst = kernels.sweep(self.lap.indptr, self.lap.indices,
                                  self.lap.data, y, work, self.delta)
            y, work = work, y
            it += 1
            self._charge_round(y)
            if history is not None:
                history.append(y.copy())
            if it % period == 0:
                stopping = worst < self.threshold
                self._charge_residual(float(worst), stopping)
                if stopping:
                    converged = True
                    break
        result = HarmonicResult(y=y, iterations=it, delta=self.delta,
                                update_norm=float(worst), threshold=self.threshold)
        if not converged:
            raise MaxIterationsExceeded(
                f"no convergence within {self.max_iters} simulated rounds "
                f"(last update norm {worst:.3e})",
                result=result,
            )
        return result, history


def _row_abs_sums(lap) -> list[float]:
    """Per-row absolute sums, accumulated in ascending column order."""
    out = []
    for i in range(lap.shape[0]):
        _cols, vals = lap.row(i)
        acc = 0.0
        for p in range(len(vals)):
            acc += abs(vals[p])
        out.append(acc)
    return out


def _gossip_delta(sim: _Sim, complex_: SimplicialComplex2, lap) -> float:
    """Step size from a max gossip over locally stored row sums.

    The matrix is symmetric with ascending index order inside each row, so
    every row sum equals the matching column sum bit for bit and the
    gossiped maximum equals the one norm the centralized path computes.
    """
    owners = _edge_owners(complex_)
    rowsum = _row_abs_sums(lap)
    initial = {v: 0.0 for v in range(complex_.vertex_count)}
    for e in range(complex_.edge_count):
        o = int(owners[e])
        if rowsum[e] > initial[o]:
            initial[o] = rowsum[e]
    best = _gossip_max(sim, "gossip_delta", initial)
    return 1.0 / max(best.values())


def run_distributed_harmonic(complex_: SimplicialComplex2, tree: SpanningTree,
                             epsilon: float = 1e-6, delta: float | None = None,
                             max_iterations: int | None = None, seed: int = 0,
                             sim_cfg: SimConfig | None = None):
    """Relaxation over the simulated network; returns (HarmonicResult, CostReport)."""
    sim = _Sim(complex_, sim_cfg or SimConfig())
    lap = build_laplacian(build_boundaries(complex_))
    if delta is None:
        delta = _gossip_delta(sim, complex_, lap)
    cap = max_iterations
    if cap is None:
        cap = default_max_iterations(complex_.edge_count, epsilon)
    phase = _HarmonicPhase(sim, complex_, lap, tree, delta, epsilon, cap)
    result, _ = phase.run(initial_vector(complex_.edge_count, seed))
    sim.cost.assert_conserved()
    return result, sim.cost


def _integral_phase(sim: _Sim, phase: str, parent_of: dict, parent_edge,
                    alive: set, root: int, y: np.ndarray) -> dict:
    """Tree potential broadcast; every alive node transmits exactly once.

    Neighbors off the tree path hear each broadcast too, which is how edge
    owners learn the potential at the far endpoint of their edges without
    extra messages.  Returns the potential per alive vertex.
    """
    f: dict[int, float] = {root: 0.0}
    sim.send(root, BROADCAST, phase, "IntegralDown", (root, 0.0), floats=1)

    def handler(recv, msg):
        sender, fval = msg.payload
        if recv in alive and parent_of.get(recv) == sender and recv not in f:
            e = int(parent_edge[recv])
            sy = y[e] if sender < recv else -y[e]
            mine = fval + sy
            f[recv] = mine
            sim.send(recv, BROADCAST, phase, "IntegralDown", (recv, mine), floats=1)

    sim.drain(handler)
    if len(f) != len(alive):
        raise NonQuiescent("potential broadcast missed part of the tree")
    return f


def run_integral_function(complex_: SimplicialComplex2, tree: SpanningTree,
                          y: np.ndarray, sim_cfg: SimConfig | None = None):
    """Distributed tree potential; returns (f array, CostReport)."""
    sim = _Sim(complex_, sim_cfg or SimConfig())
    n = complex_.vertex_count
    parent_of = {v: (int(tree.parent[v]) if tree.parent[v] >= 0 else None)
                 for v in range(n)}
    f = _integral_phase(sim, "integral", parent_of, tree.parent_edge,
                        set(range(n)), tree.root, y)
    sim.cost.assert_conserved()
    out = np.zeros(n, dtype=np.float64)
    for v, val in f.items():
        out[v] = val
    return out, sim.cost


class _PruneState:
    """Alive set and tree tables during and after leaf pruning."""

    def __init__(self, n: int, root: int, parent, children: dict[int, set]):
        self.alive = set(range(n))
        self.root = root
        self.parent: dict[int, int | None] = {
            v: (int(parent[v]) if parent[v] >= 0 else None) for v in range(n)
        }
        self.children = {v: set(children[v]) for v in range(n)}


def _prune_phase(sim: _Sim, phase: str, state: _PruneState, terminal: set):
    """Iterated leaf removal with the root replacement rule.

    A node leaves once it has no remaining children and no incident
    noncontractible non-tree edge; a non-terminal root with a single child
    hands the root role to that child.  Every leaf that survives must be
    terminal, which is asserted after quiescence.
    """

    def consider(v):
        if v not in state.alive or v in terminal or state.children[v]:
            return
        parent = state.parent[v]
        state.alive.discard(v)
        if parent is not None:
            sim.send(v, parent, phase, "PruneNotice", (v,))

    def consider_root(v):
        if (v not in state.alive or v in terminal or v != state.root
                or state.parent[v] is not None):
            return
        kids = state.children[v]
        if len(kids) == 1:
            child = next(iter(kids))
            state.alive.discard(v)
            sim.send(v, child, phase, "RootHandoff", (v,))

    def handler(recv, msg):
        if msg.kind == "PruneNotice":
            state.children[recv].discard(msg.payload[0])
            consider(recv)
            consider_root(recv)
        elif msg.kind == "RootHandoff":
            state.root = recv
            state.parent[recv] = None
            if recv in state.alive:
                consider(recv)
                consider_root(recv)

    for v in sorted(state.alive):
        consider(v)
    consider_root(state.root)
    sim.drain(handler)

    for v in state.alive:
        if not state.children[v]:
            assert v in terminal, f"non-terminal leaf {v} survived pruning"


def _select_phase(sim: _Sim, phase: str, state: _PruneState,
                  records_by_node: dict, label_rel: float):
    """Convergecast of cycle records with clustering at every hop.

    Each node clusters its own records with everything its children
    forwarded, keeps the shortest representative per cluster and sends one
    packet up carrying the kept list; an empty list still travels so the
    parent can tell the branch is done.  Returns the root's selection.
    """
    if not state.alive:
        return []
    pending = {v: len(state.children[v]) for v in state.alive}
    inbox = {v: list(records_by_node.get(v, ())) for v in state.alive}
    result: dict = {}

    def flush(v):
        reps = select_representatives(partition_homologous(inbox[v], label_rel))
        parent = state.parent[v]
        if parent is None:
            result["P"] = reps
            return
        body = tuple(
            (rec.nontree_edge, rec.terminals, rec.label, rec.hop_length)
            for rec in reps
        )
        sim.send(v, parent, phase, "CycleReport", (body,), floats=len(body))

    def handler(recv, msg):
        if msg.kind != "CycleReport" or recv not in state.alive:
            return
        for edge, terminals, label, hop_length in msg.payload[0]:
            inbox[recv].append(CycleRecord(
                nontree_edge=edge, terminals=terminals, chain={},
                hop_length=hop_length, integral=0.0, label=label,
                label_vector=(label,),
            ))
        if msg.src in state.children[recv]:
            pending[recv] -= 1
            if pending[recv] == 0:
                flush(recv)

    for v in sorted(state.alive):
        if pending[v] == 0:
            flush(v)
    sim.drain(handler)
    if "P" not in result:
        raise NonQuiescent("selection convergecast never completed at the root")
    return result["P"]


def _notice_phase(sim: _Sim, phase: str, state: _PruneState, chosen: tuple):
    """Root announces the selected edge ids down the surviving tree."""
    if not state.alive:
        return
    sim.send(state.root, BROADCAST, phase, "SelectNotice", (chosen,))

    def handler(recv, msg):
        if recv in state.alive and state.parent[recv] == msg.src and state.children[recv]:
            sim.send(recv, BROADCAST, phase, "SelectNotice", msg.payload)

    sim.drain(handler)


def _report_phase(sim: _Sim, phase: str, state: _PruneState,
                  reports_by_node: dict):
    """Pure relay of per-cycle integral vectors up the surviving tree.

    One packet per report per tree hop; no aggregation, so no completion
    markers are needed.  Returns the vectors collected at the root.
    """
    collected: dict[int, tuple] = {}

    def emit(v, body):
        parent = state.parent[v]
        if parent is None:
            collected[body[0]] = body[1]
        else:
            sim.send(v, parent, phase, "CycleReport", (body,), floats=len(body[1]))

    def handler(recv, msg):
        if recv in state.alive and msg.src in state.children[recv]:
            emit(recv, msg.payload[0])

    for v in sorted(state.alive):
        for body in reports_by_node.get(v, ()):
            emit(v, body)
    sim.drain(handler)
    return collected


def run_prune_and_select(complex_: SimplicialComplex2, tree: SpanningTree,
                         records: list, label_rel: float = 1e-4,
                         sim_cfg: SimConfig | None = None):
    """Prune the tree, then convergecast records; returns (P, CostReport).

    records are the classified noncontractible cycle records; their
    terminals pin the terminal nodes and the higher terminal of each
    contributes it to the selection convergecast.
    """
    sim = _Sim(complex_, sim_cfg or SimConfig())
    n = complex_.vertex_count
    children: dict[int, set] = {v: set() for v in range(n)}
    for v in range(n):
        if tree.parent[v] >= 0:
            children[int(tree.parent[v])].add(v)
    state = _PruneState(n, tree.root, tree.parent, children)
    terminal = set()
    for rec in records:
        terminal.update(rec.terminals)
    _prune_phase(sim, "prune", state, terminal)
    by_node: dict = {}
    for rec in records:
        by_node.setdefault(max(rec.terminals), []).append(rec)
    P = _select_phase(sim, "select", state, by_node, label_rel)
    sim.cost.assert_conserved()
    return P, sim.cost


def run_full_pipeline(complex_: SimplicialComplex2,
                      config: PipelineConfig | None = None,
                      sim_cfg: SimConfig | None = None,
                      stop_after_selection: bool = False):
    """Simulated end-to-end pipeline; returns (PipelineResult, CostReport).

    Mirrors the centralized run phase by phase: root election by id gossip
    unless the root is pinned, spanning tree, step size gossip, first
    relaxation, potential broadcast, local classification at the edge
    endpoints, pruning, selection convergecast, selection notice, one
    further relaxation plus potential round per extra representative on
    the pruned tree, report relay to the root, and the rank reduction
    there.  With stop_after_selection the run ends once the root holds P
    and the generator set stays empty; the excess-cycles experiment uses
    that mode.
    """
    cfg = config or PipelineConfig()
    scfg = sim_cfg or SimConfig()
    if cfg.label_harmonics != 1:
        raise ValueError("the simulated pipeline labels with a single harmonic")
    K = complex_
    n = K.vertex_count
    sim = _Sim(K, scfg)

    if cfg.root is None:
        best = _gossip_max(sim, "gossip_root", {v: float(v) for v in range(n)})
        root = int(max(best.values()))
    else:
        root = cfg.root

    tstate = _TreeState(n, root)
    _spanning_tree(sim, tstate, "tree", "tree_ack")
    tree = _tree_from_state(K, tstate)

    if K.edge_count == 0:
        result = PipelineResult(
            complex_=K, tree=tree, delta=None, records=[], contractible=[],
            generators=GeneratorSet(P=[], R=np.zeros((0, 0)), H=[], kept=[]),
            iterations_per_harmonic=[], ynorm_inf=(),
        )
        sim.cost.assert_conserved()
        return result, sim.cost

    lap = build_laplacian(build_boundaries(K))
    delta = cfg.delta if cfg.delta is not None else _gossip_delta(sim, K, lap)

    cap = cfg.max_iterations
    if cap is None:
        cap = default_max_iterations(K.edge_count, cfg.epsilon)
    phase = _HarmonicPhase(sim, K, lap, tree, delta, cfg.epsilon, cap)

    seeds = derive_seeds(cfg.seed, 1)
    results = []
    iterations = []
    histories = []
    res1, hist1 = phase.run(initial_vector(K.edge_count, seeds[0]))
    results.append(res1)
    iterations.append(res1.iterations)
    histories.append(hist1)
    ynorm = float(np.max(np.abs(res1.y)))

    parent_of = {v: (int(tree.parent[v]) if tree.parent[v] >= 0 else None)
                 for v in range(n)}
    f1_map = _integral_phase(sim, "integral", parent_of, tree.parent_edge,
                             set(range(n)), root, res1.y)

    records = []
    for e in nontree_edges(tree):
        rec = cycle_from_nontree_edge(K, tree, e)
        vj, vk = rec.terminals
        val = cycle_integral(float(f1_map[vj]), float(res1.y[e]), float(f1_map[vk]))
        rec.integral = val
        rec.label = abs(val)
        rec.label_vector = (abs(val),)
        records.append(rec)
    contractible, noncontractible = classify_cycles(
        records, (ynorm,), cfg.tol_abs, cfg.tol_rel
    )

    children: dict[int, set] = {v: set() for v in range(n)}
    for v in range(n):
        if tree.parent[v] >= 0:
            children[int(tree.parent[v])].add(v)
    state = _PruneState(n, root, tree.parent, children)
    terminal = set()
    for rec in noncontractible:
        terminal.update(rec.terminals)
    _prune_phase(sim, "prune", state, terminal)

    by_node: dict = {}
    for rec in noncontractible:
        by_node.setdefault(max(rec.terminals), []).append(rec)
    selected = _select_phase(sim, "select", state, by_node, cfg.label_rel)

    # selection packets carry no chains; swap back the locally built records
    chosen = [rec.nontree_edge for rec in selected]
    by_edge = {rec.nontree_edge: rec for rec in records}
    P = [by_edge[e] for e in chosen]

    if stop_after_selection or not P:
        gens = GeneratorSet(P=P, R=np.zeros((len(P), 0)), H=[], kept=[])
        result = PipelineResult(
            complex_=K, tree=tree, delta=delta, records=records,
            contractible=contractible, generators=gens,
            iterations_per_harmonic=iterations, ynorm_inf=(ynorm,),
        )
        sim.cost.assert_conserved()
        if scfg.collect_iterates:
            result.iterate_history = histories  # type: ignore[attr-defined]
        return result, sim.cost

    _notice_phase(sim, "select_notice", state, tuple(chosen))

    m = len(P)
    all_seeds = derive_seeds(cfg.seed, m)
    potentials = [f1_map]
    for i in range(1, m):
        res, hist = phase.run(initial_vector(K.edge_count, all_seeds[i]))
        results.append(res)
        iterations.append(res.iterations)
        histories.append(hist)
        f_i = _integral_phase(sim, "integral", state.parent, tree.parent_edge,
                              state.alive, state.root, res.y)
        potentials.append(f_i)

    reports_by_node: dict = {}
    for rec in P:
        vj, vk = rec.terminals
        vec = tuple(
            cycle_integral(float(potentials[i][vj]),
                           float(results[i].y[rec.nontree_edge]),
                           float(potentials[i][vk]))
            for i in range(m)
        )
        reports_by_node.setdefault(vk, []).append((rec.nontree_edge, vec))
    collected = _report_phase(sim, "reduce", state, reports_by_node)
    if set(collected) != set(chosen):
        raise NonQuiescent("root did not receive every selected integral vector")

    R = np.empty((m, m), dtype=np.float64)
    for j, e in enumerate(chosen):
        for i in range(m):
            R[i, j] = collected[e][i]
    gens = reduce_to_generators(P, [r.y for r in results], cfg.pivot_tol, R=R)

    result = PipelineResult(
        complex_=K, tree=tree, delta=delta, records=records,
        contractible=contractible, generators=gens,
        iterations_per_harmonic=iterations, ynorm_inf=(ynorm,),
    )
    sim.cost.assert_conserved()
    if scfg.collect_iterates:
        result.iterate_history = histories  # type: ignore[attr-defined]
    return result, sim.cost
