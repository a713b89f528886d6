"""LP text export of assignment models, plus the matching reader.

The emitted file is deterministic: variables and rows appear in sorted
order, every term carries an explicit coefficient, and floats are written
with ``repr`` so parsing them back is exact. Exporting the same model twice
yields byte-identical files.

Variable families: ``x_<paper>_<reviewer>`` (binary assignments),
``s_cap_<reviewer>_<level>`` (capacity slacks), ``s_sen_<paper>`` (seniority
slacks), ``cad_<a>_<b>`` (coauthor co-assignment indicators),
``v_<paper>_<region>`` (region indicators), and ``s_cy_<n>`` /
``s_cyp_<a>_<b>`` (cycle slacks). Conflicts never appear: excluded pairs
simply have no variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .model import Model

_NAME_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


class LpFormatError(ValueError):
    pass


@dataclass(frozen=True)
class LpRow:
    name: str
    coeffs: tuple[tuple[str, float], ...]
    sense: str  # "<=", ">=", "="
    rhs: float


@dataclass(frozen=True)
class ParsedLP:
    sense: str
    objective: tuple[tuple[str, float], ...]
    rows: tuple[LpRow, ...]
    bounds: tuple[tuple[str, float | None, float | None], ...]  # (var, lo, hi); lo==hi fixes
    binaries: tuple[str, ...]


def _check_name(name: str) -> str:
    if not _NAME_RE.match(name):
        raise LpFormatError(f"id {name!r} contains characters unsupported by the LP writer")
    return name


def lp_structure(model: Model) -> ParsedLP:
    """Flatten a model into the LP structure that gets written to disk."""
    params = model.params
    objective: list[tuple[str, float]] = []
    rows: list[LpRow] = []
    bounds: list[tuple[str, float | None, float | None]] = []

    for paper_id in model.papers:
        _check_name(paper_id)
    for var in model.variables:
        _check_name(var.reviewer_id)
        _check_name(model.regions[var.reviewer_id])

    def xname(paper_id: str, reviewer_id: str) -> str:
        return f"x_{paper_id}_{reviewer_id}"

    for var in model.variables:
        objective.append((xname(var.paper_id, var.reviewer_id), var.score))

    by_paper_role: dict[tuple[str, str], list] = {}
    by_reviewer: dict[str, list] = {}
    for var in model.variables:
        role = model.roles[var.reviewer_id]
        by_paper_role.setdefault((var.paper_id, role), []).append(var)
        by_reviewer.setdefault(var.reviewer_id, []).append(var)

    for paper_id in model.papers:
        for role in ("pc", "spc", "ac"):
            vars_here = by_paper_role.get((paper_id, role), [])
            if not vars_here:
                continue
            rows.append(LpRow(
                name=f"pcnt_{paper_id}_{role}",
                coeffs=tuple(sorted(
                    (xname(v.paper_id, v.reviewer_id), 1.0) for v in vars_here
                )),
                sense="<=",
                rhs=float(model.paper_quota[paper_id][role]),
            ))

    for reviewer_id in sorted(by_reviewer):
        vars_here = by_reviewer[reviewer_id]
        limit = model.pc_load_limit.get(reviewer_id)
        if limit is not None:
            rows.append(LpRow(
                name=f"load_{reviewer_id}",
                coeffs=tuple(sorted(
                    (xname(v.paper_id, v.reviewer_id), 1.0) for v in vars_here
                )),
                sense="<=",
                rhs=float(limit),
            ))
            continue
        steps = model.capacity_steps.get(reviewer_id, ())
        for w, (cap, penalty) in enumerate(steps, start=1):
            slack = f"s_cap_{reviewer_id}_{w}"
            objective.append((slack, penalty))
            bounds.append((slack, 0.0, None))
            rows.append(LpRow(
                name=f"cap_{reviewer_id}_{w}",
                coeffs=tuple(sorted(
                    (xname(v.paper_id, v.reviewer_id), 1.0) for v in vars_here
                )) + ((slack, -1.0),),
                sense="<=",
                rhs=float(cap),
            ))

    for paper_id in model.papers:
        slack = f"s_sen_{paper_id}"
        objective.append((slack, params.reward_sen))
        bounds.append((slack, float(params.min_seniority), float(params.target_seniority)))
        coeffs = [(slack, 1.0)]
        for var in by_paper_role.get((paper_id, "pc"), []):
            level = model.seniority[var.reviewer_id]
            if level:
                coeffs.append((xname(var.paper_id, var.reviewer_id), -float(level)))
        rows.append(LpRow(
            name=f"sen_{paper_id}",
            coeffs=tuple(sorted(coeffs)),
            sense="<=",
            rhs=0.0,
        ))

    committee_by_paper: dict[str, dict[str, list]] = {}
    for var in model.variables:
        if model.roles[var.reviewer_id] in ("pc", "spc"):
            committee_by_paper.setdefault(var.paper_id, {}).setdefault(
                var.reviewer_id, []
            ).append(var)

    active_pairs = model.active_co_pairs()
    for pair in sorted(active_pairs, key=lambda p: sorted(p)):
        a, b = sorted(pair)
        shared_papers = [
            paper_id for paper_id, cands in sorted(committee_by_paper.items())
            if a in cands and b in cands
        ]
        if not shared_papers:
            continue
        cad = f"cad_{a}_{b}"
        objective.append((cad, params.p_co.get(active_pairs[pair], 0.0)))
        bounds.append((cad, 0.0, 1.0))
        for paper_id in shared_papers:
            rows.append(LpRow(
                name=f"cad_{a}_{b}_{paper_id}",
                coeffs=((cad, -1.0),) + tuple(sorted(
                    ((xname(paper_id, a), 1.0), (xname(paper_id, b), 1.0))
                )),
                sense="<=",
                rhs=1.0,
            ))

    for paper_id in model.papers:
        cands = committee_by_paper.get(paper_id, {})
        regions = sorted({model.regions[r] for r in cands})
        for region in regions:
            vname = f"v_{paper_id}_{_check_name(region)}"
            objective.append((vname, params.reward_reg))
            bounds.append((vname, 0.0, 1.0))
            coeffs = [(vname, 1.0)] + [
                (xname(paper_id, r), -1.0)
                for r in sorted(cands) if model.regions[r] == region
            ]
            rows.append(LpRow(
                name=f"reg_{paper_id}_{region}",
                coeffs=tuple(sorted(coeffs)),
                sense="<=",
                rhs=0.0,
            ))

    if params.cycle_mode == "per_tuple":
        for n, (j, j2, i, i2) in enumerate(model.cycles):
            if (i, j) not in model.var_index:
                continue
            slack = f"s_cy_{n}"
            objective.append((slack, params.p_cy))
            bounds.append((slack, 0.0, 1.0))
            rows.append(LpRow(
                name=f"cy_{n}",
                coeffs=tuple(sorted(((xname(i, j), 1.0), (slack, -1.0)))),
                sense="<=",
                rhs=0.0,
            ))
    else:
        pair_slacks: set[str] = set()
        for n, (j, j2, i, i2) in enumerate(model.cycles):
            if (i, j) not in model.var_index or (i2, j2) not in model.var_index:
                continue
            a, b = sorted((j, j2))
            slack = f"s_cyp_{a}_{b}"
            if slack not in pair_slacks:
                pair_slacks.add(slack)
                objective.append((slack, params.p_cy))
                bounds.append((slack, 0.0, 1.0))
            rows.append(LpRow(
                name=f"cyp_{a}_{b}_{n}",
                coeffs=tuple(sorted(
                    ((xname(i, j), 1.0), (xname(i2, j2), 1.0), (slack, -1.0))
                )),
                sense="<=",
                rhs=1.0,
            ))

    for paper_id, reviewer_id in sorted(model.fixed_pairs):
        name = xname(paper_id, reviewer_id)
        bounds.append((name, 1.0, 1.0))

    binaries = tuple(sorted(
        xname(v.paper_id, v.reviewer_id) for v in model.variables
    ))
    return ParsedLP(
        sense="Maximize",
        objective=tuple(objective),
        rows=tuple(rows),
        bounds=tuple(bounds),
        binaries=binaries,
    )


def _format_number(value: float) -> str:
    return repr(float(value))


def _format_terms(coeffs) -> str:
    parts: list[str] = []
    for name, coeff in coeffs:
        if not parts:
            if coeff < 0:
                parts.append(f"- {_format_number(-coeff)} {name}")
            else:
                parts.append(f"{_format_number(coeff)} {name}")
        elif coeff < 0:
            parts.append(f"- {_format_number(-coeff)} {name}")
        else:
            parts.append(f"+ {_format_number(coeff)} {name}")
    return " ".join(parts)


def serialize_lp(parsed: ParsedLP) -> str:
    lines = [parsed.sense, f" obj: {_format_terms(parsed.objective)}".rstrip()]
    lines.append("Subject To")
    for row in parsed.rows:
        lines.append(f" {row.name}: {_format_terms(row.coeffs)} {row.sense} {_format_number(row.rhs)}")
    if parsed.bounds:
        lines.append("Bounds")
        for name, lo, hi in parsed.bounds:
            if lo is not None and hi is not None and lo == hi:
                lines.append(f" {name} = {_format_number(lo)}")
            elif hi is None:
                lines.append(f" {name} >= {_format_number(lo if lo is not None else 0.0)}")
            else:
                lo_text = _format_number(lo if lo is not None else 0.0)
                lines.append(f" {lo_text} <= {name} <= {_format_number(hi)}")
    if parsed.binaries:
        lines.append("Binary")
        for name in parsed.binaries:
            lines.append(f" {name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_lp(model: Model, path: str | Path) -> Path:
    """Write the model to ``path`` in LP text format (byte-stable)."""
    path = Path(path)
    path.write_text(serialize_lp(lp_structure(model)), encoding="utf-8")
    return path


def _parse_terms(text: str) -> tuple[tuple[str, float], ...]:
    tokens = text.split()
    terms: list[tuple[str, float]] = []
    sign = 1.0
    pending: float | None = None
    for token in tokens:
        if token == "+":
            sign = 1.0
        elif token == "-":
            sign = -1.0
        elif pending is None:
            try:
                pending = sign * float(token)
            except ValueError:
                raise LpFormatError(f"expected a coefficient, got {token!r}")
            sign = 1.0
        else:
            terms.append((token, pending))
            pending = None
    if pending is not None:
        raise LpFormatError("dangling coefficient without a variable")
    return tuple(terms)


def parse_lp(path: str | Path) -> ParsedLP:
    """Read a file written by :func:`export_lp` back into its structure."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    sense = None
    objective: tuple[tuple[str, float], ...] = ()
    rows: list[LpRow] = []
    bounds: list[tuple[str, float | None, float | None]] = []
    binaries: list[str] = []
    section = None
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        lowered = line.lower()
        if lowered in ("maximize", "minimize"):
            sense = line
            section = "objective"
            continue
        if lowered == "subject to":
            section = "rows"
            continue
        if lowered == "bounds":
            section = "bounds"
            continue
        if lowered == "binary":
            section = "binary"
            continue
        if lowered == "end":
            section = None
            continue
        if section == "objective":
            name, _, expr = line.partition(":")
            if name.strip() != "obj":
                raise LpFormatError(f"unexpected objective row {name!r}")
            objective = _parse_terms(expr)
        elif section == "rows":
            name, colon, rest = line.partition(":")
            if not colon:
                raise LpFormatError(f"constraint row without a name: {line!r}")
            for op in ("<=", ">=", "="):
                expr, found, rhs = rest.partition(op)
                if found:
                    rows.append(LpRow(
                        name=name.strip(),
                        coeffs=_parse_terms(expr),
                        sense=op,
                        rhs=float(rhs),
                    ))
                    break
            else:
                raise LpFormatError(f"constraint row without a sense: {line!r}")
        elif section == "bounds":
            if "<=" in line:
                parts = [p.strip() for p in line.split("<=")]
                if len(parts) != 3:
                    raise LpFormatError(f"unsupported bound line: {line!r}")
                bounds.append((parts[1], float(parts[0]), float(parts[2])))
            elif ">=" in line:
                name, _, lo = line.partition(">=")
                bounds.append((name.strip(), float(lo), None))
            elif "=" in line:
                name, _, value = line.partition("=")
                fixed = float(value)
                bounds.append((name.strip(), fixed, fixed))
            else:
                raise LpFormatError(f"unsupported bound line: {line!r}")
        elif section == "binary":
            binaries.append(line)
        else:
            raise LpFormatError(f"content outside any section: {line!r}")
    if sense is None:
        raise LpFormatError("missing objective sense")
    return ParsedLP(
        sense=sense,
        objective=objective,
        rows=tuple(rows),
        bounds=tuple(bounds),
        binaries=tuple(binaries),
    )
