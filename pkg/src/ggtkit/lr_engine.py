"""Left-to-right construction of pool refutations for the guarded family.

The refutation grows as a tree whose unfinished leaves are always labeled
by the negation clause of a bipartite partial order (recomputable from the
literals on their branch).  Each stage expands the leftmost unfinished
leaf through the order derivation for its branch.  Every transitivity
axiom that derivation needs is classified:

  lemma    the clause was already derived strictly to the left; reuse it.
  guard    one guard polarity already occurs on the branch below; use the
           guarded axiom and let the extra literal ride down until some
           clause on the branch absorbs it.
  derive   the guard variable is untouched below; resolve the two guarded
           axioms on it, learning the clause.
  branch   the guard variable is resolved below the axiom inside the order
           derivation itself, so splicing it would break regularity.  The
           expansion is abandoned for a short branching subproof that
           learns the axiom and leaves two or three new unfinished leaves,
           each adjusted back to a bipartite-order clause by a chain of
           literal replacements.

In pool mode, shared interior clauses of a spliced derivation become
lemma references to their first occurrence.  In input-lemma mode they are
re-expanded instead, until an expansion happens to be an input derivation;
later occurrences may then reference it.  That keeps every lemma an input
lemma at a size cost bounded by the dag depth.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from ggtkit.bpo import CyclicOrderError, Bpo, PartialSpec, associated_bpo, bpo_clause, tau_of_literals
from ggtkit.formulas import FormulaInstance, SizeError, gen_ggt
from ggtkit.gtproofs import PDag, build_ppi_dag
from ggtkit.literals import Clause, clause_key, encode_lit, trans_clause, triangle_of
from ggtkit.proofs import (
    AXIOM,
    LEMMA,
    RESOLVE,
    TREE,
    Derivation,
    ProofNode,
    resolve_on_var,
)

POOL_MODE = "pool"
INPUT_MODE = "input"


class ConstructionError(RuntimeError):
    """An internal invariant of the staged construction failed."""


class NodeBudgetExceeded(ConstructionError):
    """The proof grew past the configured node budget."""


class TNode:
    """Mutable tree node used while the refutation is under construction."""

    __slots__ = ("clause", "rule", "kids", "parent", "cidx", "pivot", "target",
                 "lemma_target", "inp", "nid")

    def __init__(self, clause, rule, kids=(), pivot=None, target=None):
        self.clause = set(clause)
        self.rule = rule
        self.kids = list(kids)
        self.parent = None
        self.cidx = 0
        self.pivot = pivot
        self.target = target
        self.lemma_target = False
        self.inp = rule in (AXIOM, LEMMA)
        self.nid = -1
        for idx, kid in enumerate(self.kids):
            kid.parent = self
            kid.cidx = idx


@dataclass
class LeafRec:
    node: TNode
    cplus: frozenset  # literals on the branch from the root, leaf included
    tau: frozenset  # the order pairs those literals commit to


@dataclass
class LrStats:
    n: int
    seed: int | None
    mode: str
    stages: int = 0
    case_iv: int = 0
    case_iv_gamma: int = 0
    case_iv_beta: int = 0
    lines: int = 0
    max_width: int = 0
    segment_budget: int = 0  # sum over splices of dag size * (dag depth + 1)
    unfold_lines: int = 0  # lines those splices actually emitted
    stage_log: list = field(default_factory=list)


class _Engine:
    def __init__(self, formula: FormulaInstance, mode: str, max_nodes: int | None,
                 log_stages: bool = False):
        if formula.guard_map is None:
            raise SizeError("pool construction needs a guarded instance (n >= 4)")
        self.f = formula
        self.n = formula.n
        self.mode = mode
        self.max_nodes = max_nodes
        self.node_count = 0
        self.learned: dict[Clause, list[TNode]] = {}
        self.stats = LrStats(n=self.n, seed=formula.seed, mode=mode)
        self.log_stages = log_stages
        root = self._mk(set(), "U")
        self.root = root
        self.leaves: deque[LeafRec] = deque([LeafRec(root, frozenset(), frozenset())])
        self.stage_bound = 6 * math.comb(self.n, 3)
        self.iv_bound = 2 * math.comb(self.n, 3)

    # -- node plumbing ----------------------------------------------------

    def _mk(self, clause, rule, kids=(), pivot=None, target=None) -> TNode:
        self.node_count += 1
        if self.max_nodes is not None and self.node_count > self.max_nodes:
            raise NodeBudgetExceeded(f"proof exceeded {self.max_nodes} nodes")
        return TNode(clause, rule, kids, pivot, target)

    def _resolve(self, p0: TNode, p1: TNode, pivot_var: int) -> TNode:
        clause = resolve_on_var(RESOLVE, frozenset(p0.clause), frozenset(p1.clause), pivot_var)
        node = self._mk(clause, RESOLVE, (p0, p1), pivot_var)
        node.inp = p0.inp and p1.inp and (
            p0.rule in (AXIOM, LEMMA) or p1.rule in (AXIOM, LEMMA)
        )
        return node

    def _lemma_ref(self, target: TNode) -> TNode:
        target.lemma_target = True
        return self._mk(target.clause, LEMMA, target=target)

    def _learn(self, clause, node: TNode) -> None:
        self.learned.setdefault(frozenset(clause), []).append(node)

    # -- postorder bookkeeping --------------------------------------------

    def _path_of(self, node: TNode) -> tuple[list[TNode], dict[TNode, int]]:
        path = []
        w = node
        while w is not None:
            path.append(w)
            w = w.parent
        path.reverse()
        return path, {t: i for i, t in enumerate(path)}

    def _left_of(self, node: TNode, path: list[TNode], index: dict[TNode, int]) -> bool:
        """Is `node` strictly earlier in postorder than the leaf `path` ends at?

        Nodes created during the current stage are still detached from the
        tree; they report as not-left and are reused through the
        stage-local maps instead.
        """
        w = node
        route = None
        while w is not None and w not in index:
            route = w
            w = w.parent
        if w is None:
            return False
        if route is None:
            return False  # node lies on the leaf's own branch: postorder-later
        pos = index[w]
        return route.cidx < path[pos + 1].cidx

    def _available(self, clause, path, index) -> TNode | None:
        for node in self.learned.get(frozenset(clause), ()):
            if self._left_of(node, path, index):
                return node
        return None

    # -- guard classification ----------------------------------------------

    def _guard_lit(self, tclause) -> int:
        tri = triangle_of(frozenset(tclause), self.n)
        if tri is None:
            raise ConstructionError(f"not a transitivity clause: {sorted(tclause)}")
        r, s = self.f.guard_map.guard(*tri)
        return encode_lit(r, s, self.n)

    def _t_subproof(self, tclause, ctx: frozenset, path, index) -> TNode:
        """Leaf-level treatment of one transitivity axiom inside a branching subproof."""
        hit = self._available(tclause, path, index)
        if hit is not None:
            return self._lemma_ref(hit)
        glit = self._guard_lit(tclause)
        if glit in ctx and -glit in ctx:
            raise ConstructionError("branch context contains both guard polarities")
        if glit in ctx:
            return self._mk(set(tclause) | {glit}, AXIOM)
        if -glit in ctx:
            return self._mk(set(tclause) | {-glit}, AXIOM)
        a1 = self._mk(set(tclause) | {glit}, AXIOM)
        a2 = self._mk(set(tclause) | {-glit}, AXIOM)
        node = self._resolve(a1, a2, abs(glit))
        self._learn(tclause, node)
        return node

    # -- stage driver -------------------------------------------------------

    def run(self) -> tuple[Derivation, LrStats]:
        while self.leaves:
            self._stage()
            if self.stats.stages > self.stage_bound:
                raise ConstructionError(
                    f"stage count {self.stats.stages} exceeded 6*C(n,3)={self.stage_bound}"
                )
            if self.stats.case_iv > self.iv_bound:
                raise ConstructionError(
                    f"branching count {self.stats.case_iv} exceeded 2*C(n,3)={self.iv_bound}"
                )
        d = self._freeze()
        self.stats.lines = len(d)
        self.stats.max_width = d.max_width()
        return d, self.stats

    def _stage(self) -> None:
        rec = self.leaves.popleft()
        self.stats.stages += 1
        n = self.n
        pi = associated_bpo(PartialSpec(n, rec.tau))
        if frozenset(rec.node.clause) != bpo_clause(pi):
            raise ConstructionError(
                f"unfinished leaf {sorted(rec.node.clause)} is not the clause of its order"
            )
        pdag = build_ppi_dag(n, pi)
        masks = pdag.below_pivot_masks()
        path, index = self._path_of(rec.node)
        decisions: dict[int, tuple] = {}
        trigger = None
        for nid in pdag.trans_axioms_postorder():
            nd = pdag.nodes[nid]
            hit = self._available(nd.clause, path, index)
            if hit is not None:
                decisions[nid] = ("lem", hit)
                continue
            glit = self._guard_lit(nd.clause)
            if glit in rec.cplus:
                decisions[nid] = ("guard", glit)
                continue
            if -glit in rec.cplus:
                decisions[nid] = ("guard", -glit)
                continue
            if not masks[nid] >> abs(glit) & 1:
                decisions[nid] = ("derive",)
                continue
            trigger = nid
            break
        if trigger is None:
            newroot = self._splice_expansion(pdag, decisions, path, index)
            new_leaf_nodes: list[TNode] = []
            case = "expand"
        else:
            newroot, new_leaf_nodes = self._case_branch(rec, pi, pdag.nodes[trigger], path, index)
            case = "branch"
        self._splice(rec, newroot)
        for leafrec in reversed(self._leaf_records(rec, newroot, new_leaf_nodes)):
            self.leaves.appendleft(leafrec)
        if self.log_stages:
            self.stats.stage_log.append(
                f"stage={self.stats.stages} case={case} width={len(rec.node.clause)} "
                f"pi={len(pi.pairs)} leaves={len(self.leaves)} nodes={self.node_count} "
                f"learned={sum(len(v) for v in self.learned.values())}"
            )

    def _leaf_records(self, rec, newroot, leaf_nodes) -> list[LeafRec]:
        out = []
        for leaf in leaf_nodes:
            lits = set(rec.cplus)
            w = leaf
            while True:
                lits |= w.clause
                if w is newroot:
                    break
                w = w.parent
            cplus = frozenset(lits)
            tau = tau_of_literals(cplus, self.n)
            try:
                sub_pi = associated_bpo(PartialSpec(self.n, tau))
            except CyclicOrderError as exc:
                raise ConstructionError(f"unfinished leaf branch is cyclic: {exc}") from exc
            if bpo_clause(sub_pi) != frozenset(leaf.clause):
                raise ConstructionError(
                    "new unfinished leaf is not labeled by its branch's bipartite order"
                )
            out.append(LeafRec(leaf, cplus, tau))
        return out

    # -- cases (i)-(iii): splice the adjusted order derivation ---------------

    def _splice_expansion(self, pdag: PDag, decisions, path, index) -> TNode:
        consumers = pdag.consumers()
        for nid, dec in decisions.items():
            if dec[0] != "guard":
                continue
            if len(consumers[nid]) != 1:
                raise ConstructionError("guarded transitivity axiom shared inside the dag")
            glit = dec[1]
            nd = pdag.nodes[nid]
            nd.clause = nd.clause | {glit}
            stack = [nid]
            while stack:
                x = stack.pop()
                for c in consumers[x]:
                    cn = pdag.nodes[c]
                    if glit in cn.clause:
                        continue
                    if -glit in cn.clause:
                        raise ConstructionError("guard literal meets its negation on the way down")
                    cn.clause = cn.clause | {glit}
                    stack.append(c)
        if self.mode == POOL_MODE:
            return self._unfold_pool(pdag, decisions, path, index)
        return self._unfold_input(pdag, decisions, path, index)

    def _axiom_tnode(self, pdag, nid, decisions, stage_learned, path, index) -> TNode:
        dec = decisions.get(nid)
        nd = pdag.nodes[nid]
        if dec is None or dec[0] == "guard":
            return self._mk(nd.clause, AXIOM)  # minimality axiom, or guarded axiom
        if dec[0] == "lem":
            return self._lemma_ref(dec[1])
        hit = stage_learned.get(nd.clause)
        if hit is not None:
            return self._lemma_ref(hit)
        glit = self._guard_lit(nd.clause)
        a1 = self._mk(nd.clause | {glit}, AXIOM)
        a2 = self._mk(nd.clause | {-glit}, AXIOM)
        node = self._resolve(a1, a2, abs(glit))
        stage_learned[nd.clause] = node
        self._learn(nd.clause, node)
        return node

    def _unfold_pool(self, pdag, decisions, path, index) -> TNode:
        """Depth-first expansion; shared interior nodes become lemma refs."""
        first: dict[int, TNode] = {}
        stage_learned: dict = {}
        out: list[TNode] = []
        stack: list[tuple[int, bool]] = [(pdag.root, False)]
        while stack:
            nid, expanded = stack.pop()
            nd = pdag.nodes[nid]
            if expanded:
                p1 = out.pop()
                p0 = out.pop()
                node = self._resolve(p0, p1, nd.pivot)
                first[nid] = node
                out.append(node)
                continue
            if nd.rule == AXIOM:
                out.append(self._axiom_tnode(pdag, nid, decisions, stage_learned, path, index))
                continue
            hit = first.get(nid)
            if hit is not None:
                out.append(self._lemma_ref(hit))
                continue
            stack.append((nid, True))
            stack.append((nd.premises[1], False))
            stack.append((nd.premises[0], False))
        (root,) = out
        return root

    def _unfold_input(self, pdag, decisions, path, index) -> TNode:
        """Expansion that only ever references input-derived clauses.

        Interior clauses are re-expanded until one expansion happens to be
        an input derivation; from then on they are referenced.  Any clause
        occurs at most depth-many times, so a splice emits at most
        size*depth lines.
        """
        depth = [0] * len(pdag.nodes)
        for nd in pdag.nodes:
            if nd.premises:
                depth[nd.nid] = 1 + max(depth[p] for p in nd.premises)
        self.stats.segment_budget += len(pdag.nodes) * (depth[pdag.root] + 1)
        before = self.node_count
        stage_learned: dict = {}
        out: list[TNode] = []
        stack: list[tuple[int, bool]] = [(pdag.root, False)]
        while stack:
            nid, expanded = stack.pop()
            nd = pdag.nodes[nid]
            if expanded:
                p1 = out.pop()
                p0 = out.pop()
                node = self._resolve(p0, p1, nd.pivot)
                if node.inp and nd.clause not in stage_learned:
                    stage_learned[nd.clause] = node
                    self._learn(nd.clause, node)
                out.append(node)
                continue
            if nd.rule == AXIOM:
                out.append(self._axiom_tnode(pdag, nid, decisions, stage_learned, path, index))
                continue
            hit = stage_learned.get(nd.clause)
            if hit is None:
                attached = self._available(nd.clause, path, index)
                if attached is not None and attached.inp:
                    hit = attached
            if hit is not None:
                out.append(self._lemma_ref(hit))
                continue
            stack.append((nid, True))
            stack.append((nd.premises[1], False))
            stack.append((nd.premises[0], False))
        (root,) = out
        self.stats.unfold_lines += self.node_count - before
        return root

    # -- case (iv): branch and learn -----------------------------------------

    def _case_branch(self, rec, pi: Bpo, trig, path, index):
        self.stats.case_iv += 1
        n = self.n
        kind, data = trig.kind
        if kind == "gamma":
            self.stats.case_iv_gamma += 1
            i, j, k = data
        else:
            self.stats.case_iv_beta += 1
            cyc = list(data)
            rot = cyc.index(min(cyc))
            i, j, k = cyc[rot:] + cyc[:rot]
        tclause = frozenset(trig.clause)
        glit = self._guard_lit(tclause)
        a1 = self._mk(tclause | {glit}, AXIOM)
        a2 = self._mk(tclause | {-glit}, AXIOM)
        nT = self._resolve(a1, a2, abs(glit))
        self._learn(tclause, nT)

        pbar = bpo_clause(pi)
        var = lambda a, b: abs(encode_lit(a, b, n))

        if kind == "gamma":
            steps1 = [
                (trans_clause(i, j, l, n), var(i, l))
                for l in sorted(pi.above(j))
                if l != k and not pi.precedes(i, l)
            ]
            steps2 = [
                (trans_clause(j, i, l, n), var(j, l))
                for l in sorted(pi.above(i))
                if not pi.precedes(j, l)
            ]
            base1 = self._plan_chain(rec.tau, [(i, j)], steps1)
            base2 = self._plan_chain(rec.tau, [(j, i)], steps2)
            nd_base = resolve_on_var(RESOLVE, tclause, base1[-1], var(i, k))
            root_base = resolve_on_var(RESOLVE, nd_base, base2[-1], var(i, j))
            if root_base != pbar:
                raise ConstructionError("branching subproof does not close back to the leaf clause")
            below2 = frozenset(pbar)
            below1 = below2 | nd_base
            c1, leaf1 = self._build_chain(rec, base1, steps1, below1, path, index)
            nd = self._resolve(nT, c1, var(i, k))
            c2, leaf2 = self._build_chain(rec, base2, steps2, below2, path, index)
            root = self._resolve(nd, c2, var(i, j))
            return root, [leaf1, leaf2]

        steps3 = []
        for l in sorted(pi.above(j) | pi.above(k)):
            if pi.precedes(i, l):
                continue
            partner = j if pi.precedes(j, l) else k
            steps3.append((trans_clause(i, partner, l, n), var(i, l)))
        steps4 = []
        for l in sorted(pi.above(j)):
            if not pi.precedes(k, l):
                steps4.append((trans_clause(k, j, l, n), var(k, l)))
            if not pi.precedes(i, l):
                steps4.append((trans_clause(i, j, l, n), var(i, l)))
        steps5 = [
            (trans_clause(j, i, l, n), var(j, l))
            for l in sorted(pi.above(i))
            if not pi.precedes(j, l)
        ]
        base3 = self._plan_chain(rec.tau, [(i, j), (j, k), (i, k)], steps3)
        base4 = self._plan_chain(rec.tau, [(i, j), (k, j)], steps4)
        base5 = self._plan_chain(rec.tau, [(j, i)], steps5)
        na_base = resolve_on_var(RESOLVE, tclause, base3[-1], var(i, k))
        nb_base = resolve_on_var(RESOLVE, na_base, base4[-1], var(j, k))
        root_base = resolve_on_var(RESOLVE, nb_base, base5[-1], var(i, j))
        if root_base != pbar:
            raise ConstructionError("branching subproof does not close back to the leaf clause")
        below5 = frozenset(pbar)
        below4 = below5 | nb_base
        below3 = below4 | na_base
        c3, leaf3 = self._build_chain(rec, base3, steps3, below3, path, index)
        na = self._resolve(nT, c3, var(i, k))
        c4, leaf4 = self._build_chain(rec, base4, steps4, below4, path, index)
        nb = self._resolve(na, c4, var(j, k))
        c5, leaf5 = self._build_chain(rec, base5, steps5, below5, path, index)
        root = self._resolve(nb, c5, var(i, j))
        return root, [leaf3, leaf4, leaf5]

    def _plan_chain(self, tau, new_pairs, steps) -> list[Clause]:
        """Clause sequence of a replacement chain, leaf first, guards ignored.

        Guard literals added later only ever duplicate branch literals, so
        classification contexts computed from these base clauses are exact.
        """
        sub_tau = frozenset(tau) | frozenset(new_pairs)
        leaf = bpo_clause(associated_bpo(PartialSpec(self.n, sub_tau)))
        seq = [leaf]
        for tcl, piv in steps:
            seq.append(resolve_on_var(RESOLVE, tcl, seq[-1], piv))
        return seq

    def _build_chain(self, rec, base_seq, steps, below_lits, path, index):
        """Materialize one replacement chain; returns (chain root, its leaf)."""
        leaf = self._mk(base_seq[0], "U")
        cur = leaf
        for t, (tcl, piv) in enumerate(steps, start=1):
            ctx = set(rec.cplus) | below_lits
            for clause in base_seq[t:]:
                ctx |= clause
            tsub = self._t_subproof(tcl, frozenset(ctx), path, index)
            cur = self._resolve(tsub, cur, piv)
        return cur, leaf

    # -- splicing ---------------------------------------------------------

    def _splice(self, rec, newroot: TNode) -> None:
        u = rec.node
        extras = set(newroot.clause) - u.clause
        if not extras <= set(rec.cplus):
            raise ConstructionError("expansion introduced literals outside the branch context")
        parent = u.parent
        if parent is None:
            self.root = newroot
            newroot.parent = None
            newroot.cidx = 0
        else:
            parent.kids[u.cidx] = newroot
            newroot.parent = parent
            newroot.cidx = u.cidx
        for lit in extras:
            w = parent
            while w is not None and lit not in w.clause:
                if -lit in w.clause:
                    raise ConstructionError("propagated literal meets its negation")
                if w.lemma_target:
                    raise ConstructionError("propagation would modify a lemma target")
                w.clause.add(lit)
                w = w.parent
            if w is None:
                raise ConstructionError(f"literal {lit} was never absorbed below the splice")

    # -- export -------------------------------------------------------------

    def _freeze(self) -> Derivation:
        nodes: list[ProofNode] = []
        stack: list[tuple[TNode, bool]] = [(self.root, False)]
        while stack:
            tn, expanded = stack.pop()
            if expanded:
                tn.nid = len(nodes)
                if tn.rule == LEMMA:
                    if tn.target.nid < 0:
                        raise ConstructionError("lemma reference precedes its target")
                    nodes.append(
                        ProofNode(tn.nid, LEMMA, tuple(clause_key(tn.clause)), target=tn.target.nid)
                    )
                elif tn.rule == AXIOM:
                    nodes.append(ProofNode(tn.nid, AXIOM, tuple(clause_key(tn.clause))))
                elif tn.rule == RESOLVE:
                    nodes.append(
                        ProofNode(
                            tn.nid,
                            RESOLVE,
                            tuple(clause_key(tn.clause)),
                            tuple(kid.nid for kid in tn.kids),
                            tn.pivot,
                        )
                    )
                else:
                    raise ConstructionError("unfinished leaf survived construction")
                continue
            stack.append((tn, True))
            for kid in reversed(tn.kids):
                stack.append((kid, False))
        return Derivation(
            tuple(nodes),
            root=len(nodes) - 1,
            shape=TREE,
            family=self.f.family,
            n=self.n,
            seed=self.f.seed,
        )


def _build(formula_or_n, seed, mode, max_nodes, log_stages) -> tuple[Derivation, LrStats]:
    if isinstance(formula_or_n, FormulaInstance):
        formula = formula_or_n
    else:
        formula = gen_ggt(formula_or_n, seed)
    engine = _Engine(formula, mode, max_nodes, log_stages)
    return engine.run()


def build_pool_refutation(n, seed: int = 0, max_nodes: int | None = None) -> Derivation:
    """Pool refutation of the guarded instance: tree with lemmas, regular, root empty."""
    return _build(n, seed, POOL_MODE, max_nodes, False)[0]


def build_regrti_refutation(n, seed: int = 0, max_nodes: int | None = None) -> Derivation:
    """Tree-like regular refutation of the guarded instance using only input lemmas."""
    return _build(n, seed, INPUT_MODE, max_nodes, False)[0]


def build_pool_with_stats(n, seed: int = 0, max_nodes: int | None = None,
                          log_stages: bool = False) -> tuple[Derivation, LrStats]:
    return _build(n, seed, POOL_MODE, max_nodes, log_stages)


def build_regrti_with_stats(n, seed: int = 0, max_nodes: int | None = None,
                            log_stages: bool = False) -> tuple[Derivation, LrStats]:
    return _build(n, seed, INPUT_MODE, max_nodes, log_stages)


def unfold_to_input_lemmas(d: Derivation, max_nodes: int | None = None) -> Derivation:
    """Turn a regular dag derivation into a tree using only input lemmas.

    Shared clauses are re-expanded until one expansion is an input
    derivation and referenced afterwards, so the output has at most
    size * depth lines; the conclusion and regularity are untouched.
    """
    out: list[ProofNode] = []
    inp: list[bool] = []
    learned: dict[Clause, int] = {}
    vals: list[int] = []
    stack: list[tuple[int, bool]] = [(d.root, False)]
    while stack:
        nid, expanded = stack.pop()
        nd = d.nodes[nid]
        if expanded:
            p1 = vals.pop()
            p0 = vals.pop()
            new_id = len(out)
            out.append(ProofNode(new_id, nd.rule, nd.clause, (p0, p1), nd.pivot))
            leafish = out[p0].rule in (AXIOM, LEMMA) or out[p1].rule in (AXIOM, LEMMA)
            node_inp = inp[p0] and inp[p1] and leafish
            inp.append(node_inp)
            if node_inp:
                learned.setdefault(frozenset(nd.clause), new_id)
            vals.append(new_id)
            continue
        if nd.rule == LEMMA:
            raise ValueError("input unfolding expects a dag without lemma references")
        if nd.rule == AXIOM:
            new_id = len(out)
            out.append(ProofNode(new_id, AXIOM, nd.clause))
            inp.append(True)
            vals.append(new_id)
            continue
        hit = learned.get(frozenset(nd.clause))
        if hit is not None:
            new_id = len(out)
            out.append(ProofNode(new_id, LEMMA, nd.clause, target=hit))
            inp.append(True)
            vals.append(new_id)
            continue
        if max_nodes is not None and len(out) > max_nodes:
            raise NodeBudgetExceeded(f"unfolding exceeded {max_nodes} nodes")
        stack.append((nid, True))
        stack.append((nd.premises[1], False))
        stack.append((nd.premises[0], False))
    return Derivation(
        tuple(out), root=len(out) - 1, shape=TREE, family=d.family, n=d.n, seed=d.seed
    )
