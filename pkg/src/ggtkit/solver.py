"""Restart-free DPLL with clause learning for the ordering families.

The search follows the decision cascade that makes the guarded instances
easy: (1) propagate and, on a conflict, learn the transitivity clause the
conflict resolves to (when it does) and backtrack by flipping the last
relevant decision; (2) if the transitive closure of the order decided so
far assigns a variable the trail has not, decide it with the polarity
that contradicts the closure, so the conflict/learn/flip sequence records
the closure pair; (3) otherwise walk the order derivation for the current
bipartite partial order, deciding its pivots root-first along falsified
premises; (4) if a transitivity axiom of that derivation is blocked (its
guard is resolved deeper in the derivation), branch on the axiom's
triangle directly, which learns it.

There are no restarts: the decision stack is only pushed, flipped, or
popped.  Every flip carries the clause derived from the conflict that
caused it, so the final level-zero conflict replays to the empty clause
and the whole run serializes as a checkable dag derivation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ggtkit.formulas import GGT, GT, FormulaInstance
from ggtkit.literals import clause_key, decode_lit, encode_lit, triangle_of
from ggtkit.proofs import AXIOM, DAG, RESOLVE, Derivation, ProofNode

DECISION = -1


class UnsupportedFamilyError(ValueError):
    """The decision heuristic is specific to the GT/GGT families."""


class SolverContractError(RuntimeError):
    """An internal solver invariant failed."""


@dataclass
class FlipReason:
    clause: frozenset
    node: int  # trace node id (or -1 when tracing is off)


@dataclass
class SolveStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    learned: int = 0
    restarts: int = 0
    skipped_decisions: int = 0  # unflipped decisions popped as conflict-irrelevant


@dataclass
class SolveResult:
    status: str
    stats: SolveStats
    learned_clauses: list
    trace: Derivation | None = None
    decision_markers: dict[int, list[int]] = field(default_factory=dict)


class _Trace:
    def __init__(self, family: str, n: int, seed):
        self.nodes: list[ProofNode] = []
        self.family = family
        self.n = n
        self.seed = seed
        self._axiom_ids: dict = {}
        self.markers: dict[int, list[int]] = {}
        self._pending: list[int] = []

    def decision(self, lit: int) -> None:
        self._pending.append(lit)

    def axiom(self, clause) -> int:
        key = frozenset(clause)
        nid = self._axiom_ids.get(key)
        if nid is None:
            nid = self._emit(ProofNode(len(self.nodes), AXIOM, tuple(clause_key(key))))
            self._axiom_ids[key] = nid
        return nid

    def resolve(self, p0: int, p1: int, pivot_var: int, clause) -> int:
        return self._emit(
            ProofNode(
                len(self.nodes), RESOLVE, tuple(clause_key(clause)), (p0, p1), pivot_var
            )
        )

    def _emit(self, node: ProofNode) -> int:
        if self._pending:
            self.markers[node.nid] = self._pending
            self._pending = []
        self.nodes.append(node)
        return node.nid

    def finish(self) -> Derivation:
        return Derivation(
            tuple(self.nodes),
            root=len(self.nodes) - 1,
            shape=DAG,
            family=self.family,
            n=self.n,
            seed=self.seed,
        )


class Solver:
    def __init__(self, f: FormulaInstance, trace: bool = False, tie_seed: int = 0):
        if f.family not in (GT, GGT):
            raise UnsupportedFamilyError(f"solver handles gt/ggt instances, not {f.family!r}")
        self.f = f
        self.n = f.n
        # tie break for the closure scan: which vertex is examined first
        self._vertex_order = list(range(f.n))
        if tie_seed:
            import random

            random.Random(tie_seed).shuffle(self._vertex_order)
        self.clauses: list[list[int]] = [list(clause_key(c)) for c in f.clauses]
        self.clause_set = {frozenset(c) for c in f.clauses}
        self.n_original = len(self.clauses)
        self.watches: dict[int, list[int]] = {}
        self.vals: dict[int, bool] = {}
        self._assign_order: dict[int, int] = {}
        self._order = 0
        # vertex adjacency bitmasks for the order the trail currently asserts
        self._succ = [0] * f.n
        self._adj = [0] * f.n  # assigned pair variables, per endpoint
        self.trail: list[tuple[int, object]] = []  # (true literal, reason)
        self.qhead = 0
        self.stats = SolveStats()
        self.learned_clauses: list[frozenset] = []
        self.learned_tris: set[tuple[int, int, int]] = set()
        self.trace = _Trace(f.family, f.n, f.seed) if trace else None
        self.learned_nodes: dict[int, int] = {}  # clause index -> trace node id
        self._pi_cache: dict[tuple, "_Walk"] = {}
        self._final_node = -1

    # -- assignment and propagation -----------------------------------------

    def _value(self, lit: int):
        v = self.vals.get(abs(lit))
        if v is None:
            return None
        return v == (lit > 0)

    def _assign(self, lit: int, reason) -> None:
        self.vals[abs(lit)] = lit > 0
        self._order += 1
        self._assign_order[abs(lit)] = self._order
        i, j = decode_lit(lit, self.n)
        self._succ[i] |= 1 << j
        self._adj[i] |= 1 << j
        self._adj[j] |= 1 << i
        self.trail.append((lit, reason))

    def _unassign(self, lit: int) -> None:
        del self.vals[abs(lit)]
        del self._assign_order[abs(lit)]
        i, j = decode_lit(lit, self.n)
        self._succ[i] &= ~(1 << j)
        self._adj[i] &= ~(1 << j)
        self._adj[j] &= ~(1 << i)

    def _attach(self, cidx: int):
        """Install watches for a clause; returns the index if it is falsified.

        When fewer than two literals are non-false, the second watch goes
        to the most recently falsified literal, so no unit propagation can
        be missed after backtracking past it.
        """
        clause = self.clauses[cidx]
        if len(clause) == 1:
            lit = clause[0]
            val = self._value(lit)
            if val is False:
                return cidx
            if val is None:
                self._assign(lit, cidx)
                self.stats.propagations += 1
            return None
        free = [l for l in clause if self._value(l) is not False]
        if not free:
            return cidx
        if len(free) >= 2:
            w0, w1 = free[0], free[1]
        else:
            w0 = free[0]
            w1 = max(
                (l for l in clause if l != w0),
                key=lambda l: self._assign_order.get(abs(l), 0),
            )
            if self._value(w0) is None:
                self._assign(w0, cidx)
                self.stats.propagations += 1
        rest = [l for l in clause if l != w0 and l != w1]
        clause[:] = [w0, w1] + rest
        self.watches.setdefault(w0, []).append(cidx)
        self.watches.setdefault(w1, []).append(cidx)
        return None

    def _propagate(self):
        """Watched-literal propagation; returns a falsified clause index or None."""
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead][0]
            self.qhead += 1
            falsified = -lit
            watchlist = self.watches.get(falsified)
            if not watchlist:
                continue
            kept = []
            idx = 0
            while idx < len(watchlist):
                cidx = watchlist[idx]
                idx += 1
                clause = self.clauses[cidx]
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                if self._value(clause[0]) is True:
                    kept.append(cidx)
                    continue
                moved = False
                for pos in range(2, len(clause)):
                    if self._value(clause[pos]) is not False:
                        clause[1], clause[pos] = clause[pos], clause[1]
                        self.watches.setdefault(clause[1], []).append(cidx)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(cidx)
                head = self._value(clause[0])
                if head is None:
                    self._assign(clause[0], cidx)
                    self.stats.propagations += 1
                elif head is False:
                    kept.extend(watchlist[idx:])
                    self.watches[falsified] = kept
                    return cidx
            self.watches[falsified] = kept
        return None

    # -- conflict handling ----------------------------------------------------

    def _reason_clause(self, reason) -> frozenset:
        if isinstance(reason, FlipReason):
            return reason.clause
        return frozenset(self.clauses[reason])

    def _reason_node(self, reason) -> int:
        if isinstance(reason, FlipReason):
            return reason.node
        if reason >= self.n_original:
            return self.learned_nodes[reason]
        return self.trace.axiom(self.clauses[reason])

    def _handle_conflict(self, conf_idx: int) -> bool:
        """Unwind the trail; returns False when the search space is exhausted."""
        self.stats.conflicts += 1
        k = frozenset(self.clauses[conf_idx])
        node = self._reason_node(conf_idx) if self.trace else None
        pending_learn = None
        while self.trail:
            lit, reason = self.trail.pop()
            self._unassign(lit)
            if -lit not in k:
                if reason == DECISION:
                    self.stats.skipped_decisions += 1
                continue
            if reason == DECISION:
                # flip: the derived clause is unit in -lit at this point
                self.qhead = len(self.trail)
                self._assign(-lit, FlipReason(k, node if node is not None else -1))
                self._finish_learn(pending_learn)
                return True
            rclause = self._reason_clause(reason)
            k = (rclause - {lit}) | (k - {-lit})
            if self.trace:
                node = self.trace.resolve(self._reason_node(reason), node, abs(lit), k)
            if pending_learn is None and len(k) == 3 and k not in self.clause_set:
                if triangle_of(k, self.n) is not None:
                    pending_learn = (k, node)
        if k:
            raise SolverContractError(f"trail exhausted with nonempty clause {sorted(k)}")
        self.qhead = 0
        self._final_node = node if node is not None else -1
        self._finish_learn(pending_learn)
        return False

    def _finish_learn(self, pending) -> None:
        if pending is None:
            return
        clause, node = pending
        self.stats.learned += 1
        self.learned_clauses.append(clause)
        self.clause_set.add(clause)
        self.learned_tris.add(triangle_of(clause, self.n))
        cidx = len(self.clauses)
        self.clauses.append(list(clause_key(clause)))
        if node is not None:
            self.learned_nodes[cidx] = node
        conf = self._attach(cidx)
        if conf is not None:
            # the learned clause is falsified under the post-flip trail
            ok = self._handle_conflict(conf)
            if not ok:
                raise _Exhausted()

    # -- decision cascade -------------------------------------------------------

    def _closure_decision(self) -> int | None:
        succ = self._succ
        for a in self._vertex_order:
            row = succ[a]
            if not row:
                continue
            two_step = 0
            m = row
            while m:
                b = (m & -m).bit_length() - 1
                m &= m - 1
                two_step |= succ[b]
            cand = two_step & ~self._adj[a] & ~(1 << a)
            if cand:
                c = (cand & -cand).bit_length() - 1
                return encode_lit(c, a, self.n)  # contradict the closure first
        return None

    def _walk_tools(self) -> "_Walk":
        """The order-derivation skeleton for the trail's bipartite order.

        Once the closure step is exhausted, the assigned pairs are closed
        under composition, so the bipartite order is read off the
        adjacency rows of the minimal vertices directly.
        """
        n = self.n
        succ = self._succ
        incoming = 0
        for row in succ:
            incoming |= row
        min_mask = ~incoming & ((1 << n) - 1)
        key = (min_mask, tuple(succ[i] for i in _bits(min_mask)))
        walk = self._pi_cache.get(key)
        if walk is None:
            walk = _Walk(self, min_mask)
            self._pi_cache[key] = walk
        return walk

    def _pick_decision(self) -> int:
        lit = self._closure_decision()
        if lit is not None:
            return lit
        walk = self._walk_tools()
        blocker = walk.blocking_axiom(self)
        if blocker is not None:
            kind, data = blocker
            if kind == "gamma":
                i, j, k = data
            else:
                cyc = list(data)
                rot = cyc.index(min(cyc))
                i, j, k = cyc[rot:] + cyc[:rot]
            for a, b in ((i, j), (j, k), (k, i)):
                lit = encode_lit(a, b, self.n)
                if self._value(lit) is None:
                    return lit  # falsify the axiom's literal
            raise SolverContractError("blocking axiom fully assigned without conflict")
        # walk the order derivation along falsified premises
        vals = self.vals
        nid = walk.root
        lit0 = walk.lit0
        p0 = walk.p0
        p1 = walk.p1
        while p0[nid] >= 0:
            l0 = lit0[nid]
            v = vals.get(abs(l0))
            if v is None:
                return -l0  # explore the first premise first
            nid = p0[nid] if v != (l0 > 0) else p1[nid]
        raise SolverContractError("decision walk reached a falsified axiom")

    # -- main loop -----------------------------------------------------------------

    def solve(self) -> SolveResult:
        try:
            for cidx in range(len(self.clauses)):
                conf = self._attach(cidx)
                if conf is not None:
                    if not self._handle_conflict(conf):
                        return self._unsat()
            while True:
                conf = self._propagate()
                if conf is not None:
                    if not self._handle_conflict(conf):
                        return self._unsat()
                    continue
                if len(self.vals) == self.f.nvars:
                    raise SolverContractError(
                        "complete assignment found; instance is not an ordering tautology"
                    )
                lit = self._pick_decision()
                self.stats.decisions += 1
                if self.trace:
                    self.trace.decision(lit)
                self._assign(lit, DECISION)
        except _Exhausted:
            return self._unsat()

    def _unsat(self) -> SolveResult:
        trace = None
        markers: dict[int, list[int]] = {}
        if self.trace:
            if self._final_node < 0 or self.trace.nodes[self._final_node].clause:
                raise SolverContractError("final trace node is not the empty clause")
            trace = self.trace.finish()
            markers = self.trace.markers
        return SolveResult(
            status="UNSAT",
            stats=self.stats,
            learned_clauses=list(self.learned_clauses),
            trace=trace,
            decision_markers=markers,
        )


class _Exhausted(Exception):
    """Internal signal: conflict unwinding emptied the trail."""


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _canon_tri(i: int, j: int, k: int) -> tuple[int, int, int]:
    if i < j and i < k:
        return (i, j, k)
    if j < k:
        return (j, k, i)
    return (k, i, j)


class _Walk:
    """Pivot skeleton of the order derivation, without clause sets.

    Mirrors the construction of the full derivation dag: the minimality
    chains over the non-minimal vertices, then downward elimination over
    the minimal ones.  Stores, per node, the pivot variable, the pivot
    literal carried by its first premise, and the premise ids; per
    transitivity axiom, the canonical triple, guard variable, and the
    variables resolved below it.
    """

    __slots__ = ("root", "lit0", "p0", "p1", "taxioms")

    def __init__(self, solver: "Solver", min_mask: int):
        n = solver.n
        minimals = list(_bits(min_mask))
        rows = {i: solver._succ[i] for i in minimals}
        guard_map = solver.f.guard_map
        pivot: list[int] = []
        lit0: list[int] = []
        p0: list[int] = []
        p1: list[int] = []
        raw_tax: list[tuple[int, tuple, tuple]] = []

        def axiom() -> int:
            nid = len(pivot)
            pivot.append(0)
            lit0.append(0)
            p0.append(-1)
            p1.append(-1)
            return nid

        def res(a: int, b: int, piv_var: int, l0: int) -> int:
            nid = len(pivot)
            pivot.append(piv_var)
            lit0.append(l0)
            p0.append(a)
            p1.append(b)
            return nid

        predmin: dict[int, int] = {}
        for i in minimals:
            for k in _bits(rows[i]):
                predmin.setdefault(k, i)

        cur: list[int] = []
        for i in minimals:
            node = axiom()
            for k in range(n):
                if min_mask >> k & 1 or rows[i] >> k & 1:
                    continue
                j = predmin[k]
                t = axiom()
                raw_tax.append((t, (i, j, k), ("gamma", (i, j, k))))
                node = res(t, node, abs(encode_lit(k, i, n)), encode_lit(i, k, n))
            cur.append(node)

        m = len(minimals)
        for lvl in range(m - 1, 0, -1):
            top = minimals[lvl]
            diag = cur[lvl]
            for ii in range(lvl):
                vi = minimals[ii]
                node = diag
                for tt in range(lvl):
                    if tt == ii:
                        continue
                    vt = minimals[tt]
                    t = axiom()
                    raw_tax.append((t, (vt, top, vi), ("beta", (vt, top, vi))))
                    node = res(t, node, abs(encode_lit(vt, top, n)), -encode_lit(vt, top, n))
                cur[ii] = res(node, cur[ii], abs(encode_lit(top, vi, n)), encode_lit(vi, top, n))

        self.root = cur[0]
        self.lit0 = lit0
        self.p0 = p0
        self.p1 = p1

        total = len(pivot)
        cons: list[list[int]] = [[] for _ in range(total)]
        for nid in range(total):
            if p0[nid] >= 0:
                cons[p0[nid]].append(nid)
                cons[p1[nid]].append(nid)
        masks = [0] * total
        for nid in range(total - 1, -1, -1):
            acc = 0
            for c in cons[nid]:
                acc |= masks[c] | (1 << pivot[c])
            masks[nid] = acc
        taxioms = []
        for nid, tri, kind in raw_tax:
            gvar = 0
            if guard_map is not None:
                r, s = guard_map.guard(*tri)
                gvar = abs(encode_lit(r, s, n))
            taxioms.append((_canon_tri(*tri), gvar, masks[nid], kind))
        self.taxioms = taxioms

    def blocking_axiom(self, solver: "Solver"):
        if solver.f.guard_map is None:
            return None
        vals = solver.vals
        tris = solver.learned_tris
        for tri, gvar, mask, kind in self.taxioms:
            if vals.get(gvar) is None and mask >> gvar & 1 and tri not in tris:
                return kind
        return None


def solve(f: FormulaInstance, trace: bool = False, tie_seed: int = 0) -> SolveResult:
    """Refute a GT/GGT instance; returns UNSAT with statistics (and a trace)."""
    return Solver(f, trace=trace, tie_seed=tie_seed).solve()
