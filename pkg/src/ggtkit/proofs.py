"""Proof objects and the three resolution rule variants.

A derivation is a list of nodes; premises always point at earlier ids.
Tree-shaped derivations carry lemma references (leaf nodes repeating a
clause derived earlier in postorder) and their ids are postorder positions.
Pivots are stored as positive variable ids; the checker works out which
premise holds which polarity.
"""

from __future__ import annotations

from dataclasses import dataclass

from ggtkit.literals import Clause, clause_key

AXIOM = "A"
LEMMA = "L"
RESOLVE = "R"
W_RESOLVE = "W"
DEGEN_RESOLVE = "D"

DAG = "dag"
TREE = "tree"


class RuleError(ValueError):
    """A resolution step violating the side conditions of its rule."""


class ProofStructureError(ValueError):
    """A derivation object that is not structurally well-formed."""


def apply_rule(mode: str, a: Clause, b: Clause, x: int) -> Clause:
    """Resolvent of clauses a and b on pivot literal x.

    All modes require -x not in a and x not in b.  Plain resolution also
    requires x in a and -x in b; w-resolution drops both membership
    requirements (phantom pivots); degenerate resolution returns the
    surviving premise when a pivot occurrence is missing, with a
    lexicographic tiebreak when both are.  A resolvent containing opposite
    literals is an error, never silently produced.
    """
    if -x in a:
        raise RuleError(f"premise A contains the negated pivot {-x}")
    if x in b:
        raise RuleError(f"premise B contains the pivot {x}")
    if mode == RESOLVE:
        if x not in a:
            raise RuleError(f"pivot {x} missing from premise A")
        if -x not in b:
            raise RuleError(f"pivot {-x} missing from premise B")
    elif mode == DEGEN_RESOLVE:
        in_a, in_b = x in a, -x in b
        if in_a and not in_b:
            return b
        if in_b and not in_a:
            return a
        if not in_a and not in_b:
            return min(a, b, key=clause_key)
    elif mode != W_RESOLVE:
        raise RuleError(f"unknown rule mode {mode!r}")
    resolvent = (a - {x}) | (b - {-x})
    for lit in resolvent:
        if -lit in resolvent:
            raise RuleError(f"tautological resolvent: contains {lit} and {-lit}")
    return resolvent


def resolve_on_var(mode: str, a: Clause, b: Clause, var: int) -> Clause:
    """apply_rule with the pivot given as a variable; orientation inferred.

    The premise holding the positive occurrence plays the A role.  When
    neither premise mentions the variable the orientation is immaterial.
    """
    if var <= 0:
        raise RuleError(f"pivot variable must be positive, got {var}")
    if var in a or -var in b:
        return apply_rule(mode, a, b, var)
    if var in b or -var in a:
        return apply_rule(mode, b, a, var)
    if mode == RESOLVE:
        raise RuleError(f"pivot variable {var} missing from both premises")
    return apply_rule(mode, a, b, var)


@dataclass(frozen=True)
class ProofNode:
    nid: int
    rule: str
    clause: tuple[int, ...]  # sorted by clause_key
    premises: tuple[int, ...] = ()
    pivot: int | None = None  # positive variable id
    target: int | None = None  # lemma reference

    def clause_set(self) -> Clause:
        return frozenset(self.clause)


@dataclass(frozen=True)
class Derivation:
    nodes: tuple[ProofNode, ...]
    root: int
    shape: str  # DAG or TREE
    family: str = ""
    n: int = 0
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def root_clause(self) -> Clause:
        return frozenset(self.nodes[self.root].clause)

    def max_width(self) -> int:
        return max((len(nd.clause) for nd in self.nodes), default=0)

    def depth(self) -> int:
        """Longest premise chain from any node down to an axiom or lemma leaf."""
        depths = [0] * len(self.nodes)
        for nd in self.nodes:
            if nd.premises:
                depths[nd.nid] = 1 + max(depths[p] for p in nd.premises)
        return max(depths, default=0)

    def validate_structure(self) -> None:
        """Ids contiguous, premises/targets earlier, rule arities right."""
        for idx, nd in enumerate(self.nodes):
            if nd.nid != idx:
                raise ProofStructureError(f"node {idx} carries id {nd.nid}")
            if nd.rule == AXIOM:
                if nd.premises or nd.target is not None:
                    raise ProofStructureError(f"node {idx}: axiom with premises")
            elif nd.rule == LEMMA:
                if nd.premises or nd.target is None:
                    raise ProofStructureError(f"node {idx}: lemma-ref needs a target")
                # a forward target is a pool violation, not a malformed object
                if not (0 <= nd.target < len(self.nodes)) or nd.target == idx:
                    raise ProofStructureError(
                        f"node {idx}: lemma target {nd.target} out of range"
                    )
            elif nd.rule in (RESOLVE, W_RESOLVE, DEGEN_RESOLVE):
                if len(nd.premises) != 2 or nd.pivot is None:
                    raise ProofStructureError(
                        f"node {idx}: inference needs two premises and a pivot"
                    )
                if not all(0 <= p < idx for p in nd.premises):
                    raise ProofStructureError(f"node {idx}: forward premise reference")
            else:
                raise ProofStructureError(f"node {idx}: unknown rule {nd.rule!r}")
        if not (0 <= self.root < len(self.nodes)):
            raise ProofStructureError(f"root {self.root} out of range")
        if self.shape == TREE:
            used = [0] * len(self.nodes)
            for nd in self.nodes:
                for p in nd.premises:
                    used[p] += 1
            for idx, count in enumerate(used):
                if count > 1:
                    raise ProofStructureError(
                        f"node {idx} used {count} times as a premise in a tree"
                    )
            if used[self.root] != 0:
                raise ProofStructureError("tree root used as a premise")
        elif self.shape != DAG:
            raise ProofStructureError(f"unknown shape {self.shape!r}")


def node_consumers(d: Derivation) -> list[list[int]]:
    """For each node, the inference nodes that use it as a premise."""
    consumers: list[list[int]] = [[] for _ in d.nodes]
    for nd in d.nodes:
        for p in nd.premises:
            consumers[p].append(nd.nid)
    return consumers
