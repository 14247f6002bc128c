"""Thread-parallel search with static, resplitting and randomised stealing strategies.

Nodes near the root (depth < splitting depth) are handled here in Python,
where splitting decisions are made; the subtrees below run in the nogil
kernel, so no splitting machinery is touched below the maximum depth.
"""

from __future__ import annotations

import random
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from ._jit import WORD_BITS
from .colour import colour_into
from .graph import Graph, bitset
from .kernel import CANCELLED, DONE, IMPROVED, PAUSED, SearchState
from .search import DEFAULT_BUDGET, Deadline, Incumbent, SearchNodeLabel, max_clique

MAX_SPLIT_DEPTH = 3


class SplitStrategy:
    """Base class; see :func:`parse_strategy` for the command line spellings."""

    max_depth = 0


@dataclass(frozen=True)
class Sequential(SplitStrategy):
    def __str__(self):
        return "seq"


def _check_depth(d: int, override: bool) -> None:
    if d < 1:
        raise ValueError(f"splitting depth must be >= 1, got {d}")
    if d > MAX_SPLIT_DEPTH and not override:
        raise ValueError(f"splitting depth {d} > {MAX_SPLIT_DEPTH} needs override=True")


@dataclass(frozen=True)
class StaticDepth(SplitStrategy):
    depth: int = 1
    override: bool = False

    def __post_init__(self):
        _check_depth(self.depth, self.override)

    @property
    def max_depth(self):
        return self.depth

    def __str__(self):
        return f"dist{self.depth}"


@dataclass(frozen=True)
class Resplit(SplitStrategy):
    max_depth: int = MAX_SPLIT_DEPTH
    override: bool = False

    def __post_init__(self):
        _check_depth(self.max_depth, self.override)

    def __str__(self):
        return "resplit" if self.max_depth == MAX_SPLIT_DEPTH else f"resplit{self.max_depth}"


@dataclass(frozen=True)
class RandomSteal(SplitStrategy):
    seed: int = 0
    max_depth: int = MAX_SPLIT_DEPTH

    def __str__(self):
        return "steal"


def parse_strategy(text: str, seed: int = 0) -> SplitStrategy:
    text = text.strip().lower()
    if text == "seq":
        return Sequential()
    if text.startswith("dist") and text[4:].isdigit():
        return StaticDepth(int(text[4:]))
    if text == "resplit":
        return Resplit()
    if text == "steal":
        return RandomSteal(seed)
    raise ValueError(f"unknown split strategy {text!r} (seq, dist1, dist2, dist3, resplit, steal)")


@dataclass(eq=False)
class WorkItem:
    """A subtree root: the node reached by following ``label`` from the root.

    ``bound`` is the parent's colour bound for this branch; the item is dead
    once the incumbent reaches it.
    """

    label: tuple[int, ...]
    clique: tuple[int, ...]
    candidates: np.ndarray
    bound: int

    @property
    def depth(self) -> int:
        return len(self.label)

    @property
    def leaf(self) -> bool:
        return not self.candidates.any()


@dataclass(frozen=True)
class IncumbentEvent:
    size: int
    elapsed: float
    label: SearchNodeLabel
    thread: int
    members: tuple[int, ...]


class SharedIncumbent:
    """Best clique shared by all workers.

    ``bound`` is a one-element array the kernels read at every bound check;
    it is only written inside :meth:`offer`, under the lock, and only upward.
    """

    def __init__(self, g: Graph, initial: int = 0, t0: float | None = None):
        self.g = g
        self.bound = np.array([initial], dtype=np.int64)
        self.best = Incumbent()
        self.timeline: list[IncumbentEvent] = []
        self.t0 = time.monotonic() if t0 is None else t0
        self._lock = threading.Lock()

    @property
    def size(self) -> int:
        return int(self.bound[0])

    def offer(self, clique, label, thread: int = 0, nodes: int = 0) -> bool:
        size = len(clique)
        if size <= self.bound[0]:
            return False
        with self._lock:
            if size <= self.bound[0]:
                return False
            elapsed = time.monotonic() - self.t0
            members = tuple(self.g.label_set(clique))
            lab = SearchNodeLabel(tuple(label))
            self.best = Incumbent(size, members, lab, nodes, elapsed, thread)
            self.timeline.append(IncumbentEvent(size, elapsed, lab, thread, members))
            self.bound[0] = size
            return True


class Node:
    """A coloured search node kept in Python so its unstarted branches can be handed out."""

    __slots__ = ("adj", "depth", "clique", "label", "order", "bounds", "count")

    def __init__(self, adj, depth, clique, label, order, bounds):
        self.adj = adj
        self.depth = depth
        self.clique = clique
        self.label = label
        self.order = order
        self.bounds = bounds
        self.count = len(order)

    @classmethod
    def colour(cls, adj, depth, clique, label, cands, scratch) -> "Node":
        n = adj.shape[0]
        order = np.empty(max(n, 1), dtype=np.int64)
        bounds = np.empty(max(n, 1), dtype=np.int64)
        k = colour_into(adj, cands, order, bounds, scratch[0], scratch[1])
        return cls(adj, depth, clique, label, order[:k], bounds[:k])

    def branch(self, position: int, cands: np.ndarray) -> WorkItem:
        """Child at 1-based branch ``position``; ``cands`` must be this node's
        candidates with every earlier branch vertex already removed."""
        i = self.count - position
        v = int(self.order[i])
        return WorkItem(self.label + (position,), self.clique + (v,), cands & self.adj[v],
                        self.depth + int(self.bounds[i]))

    def candidates_before(self, position: int) -> np.ndarray:
        """Candidates seen by branch ``position``: vertices not yet branched on."""
        i = self.count - position
        return bitset(self.order[: i + 1].tolist(), self.adj.shape[0])

    def branches_after(self, position: int, best: int) -> list[WorkItem]:
        """Items for branches position+1, position+2, ... whose bound still beats ``best``."""
        out = []
        if position >= self.count:
            return out
        cands = self.candidates_before(position + 1)
        for pos in range(position + 1, self.count + 1):
            item = self.branch(pos, cands)
            if item.bound <= best:
                break
            out.append(item)
            v = item.clique[-1]
            cands[v // WORD_BITS] &= ~(np.uint64(1) << np.uint64(v % WORD_BITS))
        return out


class _NodeCounter:
    def __init__(self):
        self.nodes = 0


def enumerate_split(g: Graph, d: int, incumbent: SharedIncumbent | None = None,
                    counter: _NodeCounter | None = None,
                    deadline: Deadline | None = None) -> Iterator[WorkItem]:
    """Depth-``d`` subtree roots in the order sequential search first reaches them.

    Branches are bound-checked against ``incumbent`` as they are generated;
    leaves shallower than ``d`` are emitted as items of their own.
    """
    if d < 1:
        raise ValueError("splitting distance must be >= 1")
    incumbent = incumbent or SharedIncumbent(g)
    counter = counter or _NodeCounter()
    scratch = np.zeros((2, g.words), dtype=np.uint64)

    def visit(depth, clique, label, cands):
        counter.nodes += 1
        node = Node.colour(g.adj, depth, clique, label, cands, scratch)
        cur = cands.copy()
        for pos in range(1, node.count + 1):
            if deadline is not None and deadline.check():
                return
            item = node.branch(pos, cur)
            if item.bound <= incumbent.size:
                return
            v = item.clique[-1]
            cur[v // WORD_BITS] &= ~(np.uint64(1) << np.uint64(v % WORD_BITS))
            if item.depth == d or item.leaf:
                yield item
            else:
                yield from visit(item.depth, item.clique, item.label, item.candidates)

    yield from visit(0, (), (), g.all_vertices())


class StealBoard:
    """Per worker and per level: the branch position being explored, a stolen flag
    and the node whose branches are on offer.  All fields of one worker are
    guarded by that worker's lock."""

    def __init__(self, workers: int, levels: int = MAX_SPLIT_DEPTH):
        self.levels = levels
        self.locks = [threading.Lock() for _ in range(workers)]
        self.positions = np.zeros((workers, levels + 1), dtype=np.int64)
        self.flags = np.zeros((workers, levels + 1), dtype=bool)
        self.frames: list[list[Node | None]] = [[None] * (levels + 1) for _ in range(workers)]

    def open(self, worker: int, level: int, node: Node) -> None:
        with self.locks[worker]:
            self.frames[worker][level] = node
            self.positions[worker, level] = 0
            self.flags[worker, level] = False

    def advance(self, worker: int, level: int, position: int) -> bool:
        """Claim branch ``position``; False once the remainder has been stolen."""
        with self.locks[worker]:
            if self.flags[worker, level]:
                return False
            self.positions[worker, level] = position
            return True

    def close(self, worker: int, level: int) -> None:
        with self.locks[worker]:
            self.frames[worker][level] = None


def steal_unstarted(board: StealBoard, victim: int, depth: int,
                    incumbent: SharedIncumbent | None = None) -> list[WorkItem]:
    """Flag ``victim``'s level-``depth`` node and return its unstarted branches in order."""
    with board.locks[victim]:
        node = board.frames[victim][depth]
        if node is None or board.flags[victim, depth]:
            return []
        board.flags[victim, depth] = True
        position = int(board.positions[victim, depth])
    best = incumbent.size if incumbent is not None else 0
    return node.branches_after(position, best)


@dataclass
class ParallelStats:
    per_thread_runtime: list[float] = field(default_factory=list)
    nodes_per_thread: list[int] = field(default_factory=list)
    producer_nodes: int = 0
    queue_high_water: int = 0
    total_nodes: int = 0
    incumbent_timeline: list[IncumbentEvent] = field(default_factory=list)
    wall_time: float = 0.0
    complete: bool = True
    workers: int = 1
    strategy: str = ""
    dispatch_log: list[tuple[int, int, tuple[int, ...]]] = field(default_factory=list)
    executed: list[tuple[int, ...]] = field(default_factory=list)
    sweeps: list[tuple[int, int]] = field(default_factory=list)


class QueueBoundExceeded(RuntimeError):
    pass


class WorkQueue:
    """Blocking FIFO shared by producer, sweepers and workers; detects termination.

    ``get`` returns None once the producer is done, the queue is empty, no
    sweep can add work and every worker is waiting.
    """

    def __init__(self, workers: int, capacity: int, sweeper=None, limit: int | None = None):
        self.workers = workers
        self.capacity = capacity
        self.limit = limit
        self._sweeper = sweeper
        self._items: deque[WorkItem] = deque()
        self._cond = threading.Condition()
        self._idle = 0
        self._sweeping = False
        self.producer_done = False
        self.finished = False
        self.high_water = 0
        self.dispatch_log: list[tuple[int, int, tuple[int, ...]]] = []

    def _note_length(self) -> None:
        length = len(self._items)
        self.high_water = max(self.high_water, length)
        if self.limit is not None and length > self.limit:
            raise QueueBoundExceeded(f"queue holds {length} items, limit {self.limit}")

    def put(self, item: WorkItem) -> bool:
        with self._cond:
            while len(self._items) >= self.capacity and not self.finished:
                self._cond.wait()
            if self.finished:
                return False
            self._items.append(item)
            self._note_length()
            self._cond.notify_all()
            return True

    def close(self) -> None:
        with self._cond:
            self.producer_done = True
            self._cond.notify_all()

    def abort(self) -> None:
        with self._cond:
            self.finished = True
            self._items.clear()
            self._cond.notify_all()

    def get(self, worker: int) -> WorkItem | None:
        while True:
            with self._cond:
                while True:
                    if self.finished:
                        return None
                    if self._items:
                        item = self._items.popleft()
                        self.dispatch_log.append((len(self.dispatch_log), worker, item.label))
                        self._cond.notify_all()
                        return item
                    if self.producer_done and not self._sweeping:
                        if self._sweeper is not None and self._sweeper.pending():
                            self._sweeping = True
                            break
                        if self._idle == self.workers - 1:
                            self.finished = True
                            self._cond.notify_all()
                            return None
                    self._idle += 1
                    self._cond.wait()
                    self._idle -= 1
            try:
                items = self._sweeper.sweep(worker)
            finally:
                with self._cond:
                    self._sweeping = False
                    self._items.extend(items)
                    self._note_length()
                    self._cond.notify_all()


class _Resplitter:
    """Serialised steal sweeps: level 2 on the first idle after the queue drains, then 3, ..."""

    def __init__(self, board: StealBoard, incumbent: SharedIncumbent, workers: int, max_depth: int):
        self.board = board
        self.incumbent = incumbent
        self.workers = workers
        self.max_depth = max_depth
        self.level = 1
        self.log: list[tuple[int, int]] = []

    def pending(self) -> bool:
        return self.level < self.max_depth

    def sweep(self, thief: int) -> list[WorkItem]:
        items: list[WorkItem] = []
        while not items and self.level < self.max_depth:
            self.level += 1
            for victim in range(self.workers):
                if victim != thief:
                    items.extend(steal_unstarted(self.board, victim, self.level, self.incumbent))
            self.log.append((self.level, len(items)))
        return items


class _Worker:
    def __init__(self, engine: "_Engine", wid: int):
        self.engine = engine
        self.wid = wid
        self.state = SearchState(engine.g.n, engine.g.words)
        self.python_nodes = 0
        self.started: float | None = None
        self.stopped: float | None = None
        self.executed: list[tuple[int, ...]] = []

    @property
    def nodes(self) -> int:
        return self.state.nodes + self.python_nodes

    def mark_start(self) -> None:
        if self.started is None:
            self.started = time.monotonic()

    def execute(self, item: WorkItem, split_below: int) -> None:
        """Run ``item``'s subtree; nodes shallower than ``split_below`` stay stealable."""
        eng = self.engine
        if item.bound <= eng.incumbent.size or eng.deadline.cancelled:
            return
        self.executed.append(item.label)
        if item.leaf:
            eng.incumbent.offer(item.clique, item.label, self.wid, self.nodes)
        elif item.depth < split_below:
            self.split_node(item, split_below)
        else:
            self.subtree(item)

    def split_node(self, item: WorkItem, split_below: int) -> None:
        eng = self.engine
        self.python_nodes += 1
        node = Node.colour(eng.g.adj, item.depth, item.clique, item.label,
                           item.candidates, self.state.scratch)
        level = item.depth + 1
        eng.board.open(self.wid, level, node)
        try:
            cur = item.candidates.copy()
            for pos in range(1, node.count + 1):
                child = node.branch(pos, cur)
                if child.bound <= eng.incumbent.size or eng.deadline.cancelled:
                    break
                if not eng.board.advance(self.wid, level, pos):
                    break
                v = child.clique[-1]
                cur[v // WORD_BITS] &= ~(np.uint64(1) << np.uint64(v % WORD_BITS))
                self.execute(child, split_below)
        finally:
            eng.board.close(self.wid, level)

    def subtree(self, item: WorkItem) -> None:
        eng = self.engine
        g = eng.g
        st = self.state
        st.start(g.adj, item.depth, item.candidates, item.clique, item.label)
        while True:
            status = st.run(g.adj, eng.incumbent.bound, eng.deadline.control, eng.budget)
            if status == IMPROVED:
                clique, label = st.found_clique()
                eng.incumbent.offer(clique, label, self.wid, self.nodes)
            elif status == PAUSED:
                if eng.deadline.check():
                    return
            else:
                assert status in (DONE, CANCELLED)
                return


class _Engine:
    def __init__(self, g, workers, strategy, incumbent, deadline, budget):
        self.g = g
        self.workers = workers
        self.strategy = strategy
        self.incumbent = incumbent
        self.deadline = deadline
        self.budget = budget
        self.board = StealBoard(workers, max(strategy.max_depth, 1))
        self.pool = [_Worker(self, w) for w in range(workers)]
        self.errors: list[BaseException] = []

    def _guard(self, fn, *args):
        try:
            fn(*args)
        except BaseException as exc:
            self.errors.append(exc)
            self.deadline.cancel()
            if getattr(self, "queue", None) is not None:
                self.queue.abort()

    def _run_threads(self, target, extra=()):
        threads = [threading.Thread(target=self._guard, args=(target, w), name=f"pclique-{w.wid}")
                   for w in self.pool]
        threads.extend(threading.Thread(target=self._guard, args=(fn,), name="pclique-producer")
                       for fn in extra)
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        if self.errors:
            raise self.errors[0]

    # queue-based strategies

    def run_queue(self) -> ParallelStats:
        s = self.strategy
        if isinstance(s, Resplit):
            self.sweeper = _Resplitter(self.board, self.incumbent, self.workers, s.max_depth)
            limit = self.workers * self.g.n
            split_below = s.max_depth
            first = 1
        else:
            self.sweeper = None
            limit = None
            split_below = 0
            first = s.depth
        self.queue = WorkQueue(self.workers, capacity=4 * self.workers,
                               sweeper=self.sweeper, limit=limit)
        self.producer = _NodeCounter()

        def produce():
            try:
                for item in enumerate_split(self.g, first, self.incumbent, self.producer, self.deadline):
                    if not self.queue.put(item):
                        break
            finally:
                self.queue.close()

        def consume(worker: _Worker):
            while True:
                item = self.queue.get(worker.wid)
                if item is None:
                    break
                worker.mark_start()
                worker.execute(item, split_below)
                if self.deadline.check():
                    self.queue.abort()
            worker.stopped = time.monotonic()

        self._run_threads(consume, extra=(produce,))
        stats = self._collect()
        stats.producer_nodes = self.producer.nodes
        stats.total_nodes += self.producer.nodes
        stats.queue_high_water = self.queue.high_water
        stats.dispatch_log = list(self.queue.dispatch_log)
        if self.sweeper is not None:
            stats.sweeps = list(self.sweeper.log)
        return stats

    # randomised work stealing

    def run_steal(self) -> ParallelStats:
        s = self.strategy
        deques = [deque() for _ in range(self.workers)]
        locks = [threading.Lock() for _ in range(self.workers)]
        busy_lock = threading.Lock()
        busy = [1]
        done = threading.Event()

        class Frame:
            __slots__ = ("node", "next", "cands")

        def push(worker: _Worker, item: WorkItem) -> None:
            worker.python_nodes += 1
            f = Frame()
            f.node = Node.colour(self.g.adj, item.depth, item.clique, item.label,
                                 item.candidates, worker.state.scratch)
            f.next = 1
            f.cands = item.candidates.copy()
            with locks[worker.wid]:
                deques[worker.wid].append(f)

        def take(frame) -> WorkItem | None:
            if frame.next > frame.node.count:
                return None
            child = frame.node.branch(frame.next, frame.cands)
            if child.bound <= self.incumbent.size:
                return None
            frame.next += 1
            v = child.clique[-1]
            frame.cands[v // WORD_BITS] &= ~(np.uint64(1) << np.uint64(v % WORD_BITS))
            return child

        def run_child(worker: _Worker, child: WorkItem) -> None:
            if child.bound <= self.incumbent.size or self.deadline.cancelled:
                return
            worker.executed.append(child.label)
            if child.leaf:
                self.incumbent.offer(child.clique, child.label, worker.wid, worker.nodes)
            elif child.depth < s.max_depth:
                push(worker, child)
            else:
                worker.subtree(child)

        def work(worker: _Worker):
            rng = random.Random(s.seed * 1_000_003 + worker.wid)
            wid = worker.wid
            if wid == 0:
                worker.mark_start()
                root = WorkItem((), (), self.g.all_vertices(), self.g.n + 1)
                worker.executed.append(())
                push(worker, root)
            working = wid == 0
            while not done.is_set():
                if working:
                    child = None
                    with locks[wid]:
                        while deques[wid]:
                            child = take(deques[wid][-1])
                            if child is not None:
                                break
                            deques[wid].pop()
                    if child is not None:
                        run_child(worker, child)
                        if self.deadline.check():
                            done.set()
                        continue
                    working = False
                    with busy_lock:
                        busy[0] -= 1
                        if busy[0] == 0:
                            done.set()
                    continue
                if self.workers == 1:
                    break
                victim = rng.randrange(self.workers - 1)
                victim += victim >= wid
                stolen = None
                with locks[victim]:
                    if deques[victim]:
                        stolen = deques[victim].popleft()
                        with busy_lock:
                            busy[0] += 1
                if stolen is None:
                    time.sleep(1e-4)
                    continue
                worker.mark_start()
                with locks[wid]:
                    deques[wid].append(stolen)
                working = True
            worker.stopped = time.monotonic()

        self._run_threads(work)
        return self._collect()

    def _collect(self) -> ParallelStats:
        stats = ParallelStats(workers=self.workers, strategy=str(self.strategy))
        for w in self.pool:
            if w.started is None or w.stopped is None:
                stats.per_thread_runtime.append(0.0)
            else:
                stats.per_thread_runtime.append(w.stopped - w.started)
            stats.nodes_per_thread.append(w.nodes)
            stats.executed.extend(w.executed)
        stats.total_nodes = sum(stats.nodes_per_thread)
        stats.incumbent_timeline = list(self.incumbent.timeline)
        stats.complete = not self.deadline.cancelled
        return stats


def solve_parallel(g: Graph, workers: int, strategy: SplitStrategy, *,
                   initial_bound: int = 0, timeout: float | None = None,
                   budget: int = DEFAULT_BUDGET) -> tuple[Incumbent, ParallelStats]:
    """Maximum clique of a degree-ordered graph using ``workers`` threads.

    Every strategy publishes improvements to one shared incumbent at once,
    and every strategy returns the same clique size as :func:`max_clique`.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if isinstance(strategy, Sequential) and workers > 1:
        raise ValueError("the sequential strategy runs exactly one worker")
    deadline = Deadline(timeout)
    t0 = time.monotonic()
    if isinstance(strategy, Sequential):
        inc, seq = max_clique(g, initial_bound, deadline=deadline, budget=budget)
        stats = ParallelStats(per_thread_runtime=[seq.wall_time], nodes_per_thread=[seq.nodes],
                              total_nodes=seq.nodes, wall_time=seq.wall_time,
                              complete=seq.complete, strategy="seq",
                              incumbent_timeline=[
                                  IncumbentEvent(e.size, e.found_at_time, e.found_at_label, 0, e.members)
                                  for e in seq.incumbent_timeline])
        return inc, stats
    incumbent = SharedIncumbent(g, initial_bound, t0)
    engine = _Engine(g, workers, strategy, incumbent, deadline, budget)
    if isinstance(strategy, RandomSteal):
        stats = engine.run_steal()
    elif isinstance(strategy, (StaticDepth, Resplit)):
        stats = engine.run_queue()
    else:
        raise TypeError(f"unsupported strategy {strategy!r}")
    stats.wall_time = time.monotonic() - t0
    return incumbent.best, stats
