"""Constructive regular derivations for GT_pi (and GT as the empty case).

The derivation eliminates vertices downward.  First, for every minimal
vertex i, the minimality clause is chained against the mixed transitivity
axioms T[i, J_k, k] (pivot x[k,i]) for each non-minimal k not above i,
which trades the non-minimal literals for side literals that ride along
as clause-set members from then on.  The resulting clauses play the role
of minimality clauses over the minimal vertices alone, and the standard
elimination runs on those: to remove the top vertex b, its clause is
chain-resolved through the transitivity triangles into each remaining
vertex's clause.  The final clause is exactly the negation of pi, every
pivot is either a pair of minimal vertices or a pair (i, k) with i
minimal, k non-minimal and i not below k, and no variable repeats along
any path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ggtkit.bpo import Bpo, bpo_clause
from ggtkit.formulas import GT, GT_PI, SizeError
from ggtkit.literals import Clause, alpha_clause, clause_key, encode_lit, trans_clause
from ggtkit.proofs import AXIOM, DAG, RESOLVE, Derivation, ProofNode, resolve_on_var


@dataclass
class PDagNode:
    __slots__ = ("nid", "rule", "clause", "premises", "pivot", "kind")
    nid: int
    rule: str
    clause: frozenset
    premises: tuple[int, ...]
    pivot: int | None
    kind: tuple | None  # axioms: ("alpha", i) | ("beta", (a,b,c)) | ("gamma", (i,j,k))


@dataclass
class PDag:
    """The derivation dag plus the metadata the refutation engine needs."""

    n: int
    pi: Bpo
    nodes: list[PDagNode] = field(default_factory=list)
    root: int = -1
    _axiom_ids: dict = field(default_factory=dict)

    def axiom(self, clause: Clause, kind: tuple) -> int:
        nid = self._axiom_ids.get(clause)
        if nid is not None:
            return nid
        nid = len(self.nodes)
        self.nodes.append(PDagNode(nid, AXIOM, clause, (), None, kind))
        self._axiom_ids[clause] = nid
        return nid

    def resolve(self, p0: int, p1: int, pivot_var: int) -> int:
        clause = resolve_on_var(
            RESOLVE, self.nodes[p0].clause, self.nodes[p1].clause, pivot_var
        )
        nid = len(self.nodes)
        self.nodes.append(PDagNode(nid, RESOLVE, clause, (p0, p1), pivot_var, None))
        return nid

    def consumers(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.nodes]
        for nd in self.nodes:
            for p in nd.premises:
                out[p].append(nd.nid)
        return out

    def below_pivot_masks(self) -> list[int]:
        """Per node, bitmask of variables resolved on some path toward the root."""
        consumers = self.consumers()
        masks = [0] * len(self.nodes)
        for nid in range(len(self.nodes) - 1, -1, -1):
            acc = 0
            for c in consumers[nid]:
                acc |= masks[c] | (1 << self.nodes[c].pivot)
            masks[nid] = acc
        return masks

    def trans_axioms_postorder(self) -> list[int]:
        """Transitivity axiom node ids in depth-first postorder of the dag."""
        order: list[int] = []
        seen: set[int] = set()
        stack: list[tuple[int, bool]] = [(self.root, False)]
        while stack:
            nid, expanded = stack.pop()
            if expanded:
                nd = self.nodes[nid]
                if nd.rule == AXIOM and nd.kind[0] in ("beta", "gamma"):
                    order.append(nid)
                continue
            if nid in seen:
                continue
            seen.add(nid)
            stack.append((nid, True))
            for p in reversed(self.nodes[nid].premises):
                stack.append((p, False))
        return order

    def to_derivation(self, family: str, seed: int | None = None) -> Derivation:
        nodes = tuple(
            ProofNode(
                nd.nid,
                nd.rule,
                tuple(clause_key(nd.clause)),
                nd.premises,
                nd.pivot,
            )
            for nd in self.nodes
        )
        return Derivation(nodes, root=self.root, shape=DAG, family=family, n=self.n, seed=seed)


def build_ppi_dag(n: int, pi: Bpo) -> PDag:
    if n < 2:
        raise SizeError(f"derivation needs n >= 2, got {n}")
    if pi.n != n:
        raise ValueError(f"pi is over {pi.n} vertices, wanted {n}")
    dag = PDag(n=n, pi=pi)
    minimals = sorted(pi.minimals)
    non_minimals = [k for k in range(n) if k not in pi.minimals]
    j_of = {k: min(pi.below(k)) for k in non_minimals}

    # Minimality clauses, with non-minimal vertices resolved away.
    cur: list[int] = []
    for i in minimals:
        node = dag.axiom(alpha_clause(i, n), ("alpha", i))
        for k in non_minimals:
            if pi.precedes(i, k):
                continue  # x[k,i] stays as a side literal
            j = j_of[k]
            t = dag.axiom(trans_clause(i, j, k, n), ("gamma", (i, j, k)))
            node = dag.resolve(t, node, abs(encode_lit(k, i, n)))
        cur.append(node)

    # Downward elimination over the minimal vertices.
    m = len(minimals)
    for lvl in range(m - 1, 0, -1):
        top = minimals[lvl]
        diag = cur[lvl]
        for i in range(lvl):
            vi = minimals[i]
            node = diag
            for t in range(lvl):
                if t == i:
                    continue
                vt = minimals[t]
                tax = dag.axiom(trans_clause(vt, top, vi, n), ("beta", (vt, top, vi)))
                node = dag.resolve(tax, node, abs(encode_lit(vt, top, n)))
            cur[i] = dag.resolve(node, cur[i], abs(encode_lit(top, vi, n)))

    dag.root = cur[0]
    root_clause = dag.nodes[dag.root].clause
    expected = bpo_clause(pi)
    if root_clause != expected:
        raise AssertionError(
            f"derivation root {sorted(root_clause)} differs from the pi clause {sorted(expected)}"
        )
    return dag


def build_ppi(n: int, pi: Bpo) -> Derivation:
    """Regular derivation of the pi-negation clause from GT_pi(n)."""
    return build_ppi_dag(n, pi).to_derivation(GT_PI if pi.pairs else GT)


def build_pn(n: int) -> Derivation:
    """Regular refutation of GT(n) with O(n^3) nodes."""
    return build_ppi_dag(n, Bpo.empty(n)).to_derivation(GT)


def allowed_pivot_vars(pi: Bpo, n: int) -> frozenset[int]:
    """Pivot variables the pi derivation may use: pairs of minimal
    vertices, plus (i, k) with i minimal, k non-minimal, i not below k."""
    allowed = set()
    minimals = sorted(pi.minimals)
    for a in range(len(minimals)):
        for b in range(a + 1, len(minimals)):
            allowed.add(abs(encode_lit(minimals[a], minimals[b], n)))
    for i in minimals:
        for k in range(n):
            if k not in pi.minimals and not pi.precedes(i, k):
                allowed.add(abs(encode_lit(i, k, n)))
    return frozenset(allowed)
