"""DIMACS CNF serialization with family metadata in comment lines.

Header comments carry enough to reproduce the instance:

    c family=ggt n=6 seed=1
    c family=gtpi n=4 pi=1:3,2:3
    c guards=unguarded          (GGT below n=4)

Clause order is canonical (minimality clauses by vertex, then transitivity
clauses by canonical triple) so identical parameters give byte-identical
files.
"""

from __future__ import annotations

from ggtkit.bpo import Bpo
from ggtkit.formulas import GGT, GT, GT_PI, FormulaInstance, guards
from ggtkit.literals import clause_key, make_clause, num_vars, PairError, TautologyError


class DimacsError(ValueError):
    """Parse error carrying the offending 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def write_dimacs(instance: FormulaInstance) -> str:
    lines = [f"c family={instance.family} n={instance.n}"]
    if instance.seed is not None:
        lines[0] += f" seed={instance.seed}"
    if instance.family == GT_PI:
        assert instance.pi is not None
        pairs = ",".join(f"{a}:{b}" for a, b in sorted(instance.pi.pairs))
        lines[0] += f" pi={pairs}"
    if instance.unguarded:
        lines.append("c guards=unguarded")
    lines.append(f"p cnf {instance.nvars} {len(instance.clauses)}")
    for clause in instance.clauses:
        lines.append(" ".join(str(l) for l in clause_key(clause)) + " 0")
    return "\n".join(lines) + "\n"


def _parse_header_comment(text: str, meta: dict) -> None:
    for tok in text.split():
        if "=" in tok:
            key, val = tok.split("=", 1)
            meta[key] = val


def read_dimacs(text: str) -> FormulaInstance:
    meta: dict[str, str] = {}
    nvars = nclauses = None
    clauses = []
    seen = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            _parse_header_comment(line[1:], meta)
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(line_no, f"malformed problem line {line!r}")
            try:
                nvars, nclauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(line_no, f"malformed problem line {line!r}") from None
            continue
        if nvars is None:
            raise DimacsError(line_no, "clause before problem line")
        parts = line.split()
        if parts[-1] != "0":
            raise DimacsError(line_no, "clause not terminated by 0")
        try:
            lits = [int(p) for p in parts[:-1]]
        except ValueError:
            raise DimacsError(line_no, f"bad literal in {line!r}") from None
        for lit in lits:
            if lit == 0 or abs(lit) > nvars:
                raise DimacsError(line_no, f"literal {lit} out of range 1..{nvars}")
        try:
            clause = make_clause(lits)
        except TautologyError as exc:
            raise DimacsError(line_no, str(exc)) from None
        if len(clause) != len(lits):
            raise DimacsError(line_no, "duplicate literal in clause")
        if clause in seen:
            raise DimacsError(line_no, "duplicate clause")
        seen.add(clause)
        clauses.append(clause)
    if nvars is None:
        raise DimacsError(0, "missing problem line")
    if nclauses != len(clauses):
        raise DimacsError(0, f"header promised {nclauses} clauses, found {len(clauses)}")

    family = meta.get("family")
    if family not in (GT, GGT, GT_PI):
        raise DimacsError(0, f"missing or unknown family in header: {family!r}")
    try:
        n = int(meta["n"])
    except (KeyError, ValueError):
        raise DimacsError(0, "missing or malformed n in header") from None
    if num_vars(n) != nvars:
        raise DimacsError(0, f"n={n} implies {num_vars(n)} vars, header says {nvars}")
    seed = int(meta["seed"]) if "seed" in meta else None
    unguarded = meta.get("guards") == "unguarded"
    pi = None
    if family == GT_PI:
        try:
            pairs = [
                tuple(int(x) for x in item.split(":"))
                for item in meta.get("pi", "").split(",")
                if item
            ]
            pi = Bpo.of(n, pairs)
        except (ValueError, PairError) as exc:
            raise DimacsError(0, f"malformed pi in header: {exc}") from None
    gmap = None
    if family == GGT and seed is not None and not unguarded:
        gmap = guards(n, seed)
    return FormulaInstance(
        family=family,
        n=n,
        clauses=tuple(clauses),
        seed=seed,
        guard_map=gmap,
        pi=pi,
        unguarded=unguarded,
    )
