"""Batch command-line frontend.

Every subcommand emits one verdict per line as ``anchor  status  detail``
(tab-separated with --format tsv); anchors are stable machine-readable
names of the checked property.  Exit codes: 0 all verdicts hold, 1 some
verdict fails, 2 some verdict undecided and none fails, 3 usage or
parse error.
"""

from __future__ import annotations

import argparse
import sys

from . import finite as finmod
from . import lietype as ltmod
from .algebra import (
    Algebra,
    AlgebraError,
    BudgetError,
    LinearMap,
    classify_identities,
    center,
    nucleus,
    torsion_free,
)
from .catalog import (
    CATALOG_NAMES,
    SafError,
    catalog as load_catalog,
    parse as parse_saf,
    serialize as serialize_saf,
)
from .fields import FieldError, GF, QQ
from .linalg import Matrix
from .peirce import (
    PeirceError,
    check_conditions_1_to_4,
    check_offdiag_commutant,
    is_prime,
    peirce_context,
    verify_peirce_relations,
)
from .verdict import Verdict


class CliError(ValueError):
    """Bad usage or unparseable input; maps to exit code 3."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


class Emitter:
    """Collects verdict rows and derives the process exit code."""

    def __init__(self, fmt: str, out):
        self.fmt = fmt
        self.out = out
        self.statuses: list[Verdict] = []

    def emit(self, anchor: str, status: Verdict, detail: str = ""):
        self.statuses.append(status)
        if self.fmt == "tsv":
            print(f"{anchor}\t{status}\t{detail}", file=self.out)
        else:
            print(f"{anchor:<34} {str(status):<10} {detail}", file=self.out)

    def fact(self, anchor: str, detail: str):
        self.emit(anchor, Verdict.HOLDS, detail)

    def from_bool(self, anchor: str, value: bool | None, detail: str = ""):
        if value is None:
            self.emit(anchor, Verdict.UNDECIDED, detail or "enumeration budget exceeded")
        else:
            self.emit(anchor, Verdict.HOLDS if value else Verdict.FAILS, detail)

    def exit_code(self) -> int:
        if any(s is Verdict.FAILS for s in self.statuses):
            return 1
        if any(s is Verdict.UNDECIDED for s in self.statuses):
            return 2
        return 0


def _parse_field(text: str):
    if text == "Q":
        return QQ
    if text.startswith("GFp:"):
        try:
            return GF(int(text[4:]))
        except (ValueError, FieldError) as exc:
            raise CliError(f"bad field {text!r}: {exc}") from exc
    raise CliError(f"field must be Q or GFp:<p>, got {text!r}")


def _parse_coords(text: str, A: Algebra) -> tuple:
    parts = text.replace(",", " ").split()
    if len(parts) != A.dim:
        raise CliError(f"expected {A.dim} coordinates, got {len(parts)}")
    try:
        return tuple(A.field.parse(p) for p in parts)
    except (ValueError, FieldError) as exc:
        raise CliError(f"bad coordinate in {text!r}: {exc}") from exc


def _load_algebra(args) -> Algebra:
    if args.file:
        try:
            with open(args.file, "rb") as fh:
                return parse_saf(fh.read())
        except OSError as exc:
            raise CliError(f"cannot read {args.file}: {exc}") from exc
    if args.catalog:
        field = _parse_field(args.field)
        try:
            return load_catalog(args.catalog, field)
        except AlgebraError as exc:
            raise CliError(str(exc)) from exc
    raise CliError("one of --catalog or --file is required")


def _context(A: Algebra, args):
    if args.idem:
        e1 = _parse_coords(args.idem, A)
    elif A.idempotent is not None:
        e1 = A.idempotent
    else:
        raise CliError("no idempotent: pass --idem or use a catalog algebra")
    try:
        return peirce_context(A, e1)
    except PeirceError as exc:
        raise CliError(f"{exc.kind}: {exc}") from exc


def _fmt_vec(F, coords) -> str:
    return "(" + ", ".join(F.format(c) for c in coords) + ")"


def _fmt_matrix(m: Matrix) -> str:
    F = m.field
    return "; ".join(" ".join(F.format(v) for v in row) for row in m.rows)


# ---------------------------------------------------------------- map files


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def load_linear_map(path: str, A: Algebra) -> LinearMap:
    """Read a matrix block:  ``lmap 1`` / ``dim <d>`` / d ``row ...`` lines."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != "lmap 1":
        raise CliError(f"{path}:1: expected magic line 'lmap 1'")
    if len(lines) < 2 or not lines[1][1].startswith("dim "):
        raise CliError(f"{path}: missing 'dim <d>' line")
    try:
        d = int(lines[1][1].split()[1])
    except (IndexError, ValueError) as exc:
        raise CliError(f"{path}:{lines[1][0]}: bad dim line") from exc
    if d != A.dim:
        raise CliError(f"{path}: map dim {d} does not match algebra dim {A.dim}")
    rows = []
    for lineno, line in lines[2:]:
        parts = line.split()
        if parts[0] != "row":
            raise CliError(f"{path}:{lineno}: expected 'row ...'")
        if len(parts) != d + 1:
            raise CliError(f"{path}:{lineno}: expected {d} entries")
        try:
            rows.append([A.field.parse(p) for p in parts[1:]])
        except (ValueError, FieldError) as exc:
            raise CliError(f"{path}:{lineno}: {exc}") from exc
    if len(rows) != d:
        raise CliError(f"{path}: expected {d} row lines, got {len(rows)}")
    return LinearMap(A, Matrix(A.field, rows, ncols=d))


def load_map_table(path: str, ring: finmod.FiniteRing) -> finmod.MapTable:
    """Read a value table:  ``tmap 1`` / ``size <S>`` / S ``map <i> <j>`` lines."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != "tmap 1":
        raise CliError(f"{path}:1: expected magic line 'tmap 1'")
    if len(lines) < 2 or not lines[1][1].startswith("size "):
        raise CliError(f"{path}: missing 'size <S>' line")
    try:
        size = int(lines[1][1].split()[1])
    except (IndexError, ValueError) as exc:
        raise CliError(f"{path}:{lines[1][0]}: bad size line") from exc
    if size != ring.size:
        raise CliError(f"{path}: table size {size} does not match ring size {ring.size}")
    values = [None] * size
    for lineno, line in lines[2:]:
        parts = line.split()
        if parts[0] != "map" or len(parts) != 3:
            raise CliError(f"{path}:{lineno}: expected 'map <i> <j>'")
        try:
            i, j = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise CliError(f"{path}:{lineno}: indices must be integers") from exc
        if not (0 <= i < size and 0 <= j < size):
            raise CliError(f"{path}:{lineno}: index out of range 0..{size - 1}")
        if values[i] is not None:
            raise CliError(f"{path}:{lineno}: duplicate entry for element {i}")
        values[i] = j
    missing = [i for i, v in enumerate(values) if v is None]
    if missing:
        raise CliError(f"{path}: table not total; missing element {missing[0]}")
    return finmod.MapTable(ring, values)


def dump_map_table(T: finmod.MapTable) -> str:
    lines = ["tmap 1", f"size {T.ring.size}"]
    lines += [f"map {i} {v}" for i, v in enumerate(T.values)]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- subcommands


def _cmd_info(args, em: Emitter):
    A = _load_algebra(args)
    F = A.field
    em.fact("info:field", F.name)
    em.fact("info:dim", str(A.dim))
    em.fact("info:unit", _fmt_vec(F, A.unit) if A.unit is not None else "none")
    em.fact(
        "info:idempotent",
        _fmt_vec(F, A.idempotent) if A.idempotent is not None else "none",
    )
    rep = classify_identities(A, budget=args.budget or 2 ** 16)

    def flag(v):
        return "undecided" if v is None else str(v).lower()

    em.fact("info:associative", flag(rep.associative))
    em.fact("info:alternative", flag(rep.alternative))
    em.fact("info:flexible", flag(rep.flexible))
    em.fact("info:center-dim", str(center(A).dim))
    em.fact("info:nucleus-dim", str(nucleus(A).dim))
    em.fact("info:center-meet-nucleus-dim", str(center(A).intersect(nucleus(A)).dim))


def _cmd_check(args, em: Emitter):
    A = _load_algebra(args)
    props = args.prop or (["identities"] if not (args.torsion or args.prime) else [])
    if "identities" in props or any(
        p in props for p in ("associative", "alternative", "flexible")
    ):
        rep = classify_identities(A, budget=args.budget or 2 ** 16)
        wanted = (
            ("associative", "alternative", "flexible")
            if "identities" in props
            else [p for p in props if p != "identities"]
        )
        values = {
            "associative": rep.associative,
            "alternative": rep.alternative,
            "flexible": rep.flexible,
        }
        for name in wanted:
            em.from_bool(f"check:{name}", values[name])
    if args.torsion:
        for k in args.torsion:
            em.from_bool(f"check:torsion-free-{k}", torsion_free(A, k))
    if args.prime:
        rep = is_prime(A, budget=args.budget or 2 ** 17, seed=args.seed)
        detail = rep.detail
        if rep.witness is not None:
            a, b = rep.witness
            detail = f"aRb = 0 at a = {_fmt_vec(A.field, a)}, b = {_fmt_vec(A.field, b)}"
        em.emit("check:prime", rep.status, detail)


def _cmd_peirce(args, em: Emitter):
    A = _load_algebra(args)
    ctx = _context(A, args)
    em.fact("peirce:dims", str(ctx.dims))
    run_all = not (args.relations or args.conditions or args.commutant)
    if args.relations or run_all:
        rep = verify_peirce_relations(ctx, budget=args.budget or 2 ** 16)
        em.from_bool("peirce:relation-composition", rep.composition)
        em.from_bool("peirce:relation-same-component", rep.same_component)
        em.from_bool("peirce:relation-orthogonality", rep.orthogonality)
        em.from_bool("peirce:relation-square-zero", rep.square_free)
        for v in rep.violations:
            em.fact("peirce:relation-witness", str(v))
    if args.conditions or run_all:
        rep = check_conditions_1_to_4(ctx)
        for key, verdict in rep.entries.items():
            em.emit(f"peirce:cond-{key}", verdict.status, verdict.detail)
    if args.commutant or run_all:
        for side in ("12", "21"):
            rep = check_offdiag_commutant(ctx, side)
            em.from_bool(
                f"peirce:commutant-{side}",
                rep.contained_in_center,
                f"diagonal commutant of R{side} has dim {rep.subspace.dim}",
            )


def _cmd_derive(args, em: Emitter):
    A = _load_algebra(args)
    if args.n:
        space = ltmod.lie_n_derivation_space(
            A, args.n, budget=args.budget or 10 ** 6
        )
        label = f"derive:lie{args.n}-dim"
    else:
        space = ltmod.derivation_space(A)
        label = "derive:der-dim"
    em.fact(label, str(space.dim))
    if args.basis:
        for i, D in enumerate(space.maps()):
            em.fact(f"derive:basis-{i}", _fmt_matrix(D.matrix))


def _cmd_decompose(args, em: Emitter):
    A = _load_algebra(args)
    ctx = _context(A, args)
    if not args.map:
        raise CliError("decompose needs --map <path> with an lmap matrix block")
    D = load_linear_map(args.map, A)
    n = args.n or 2
    try:
        dec = ltmod.decompose(ctx, D, n)
    except ltmod.DecompositionError as exc:
        em.emit(f"decompose:{exc.certificate.replace('_', '-')}", Verdict.FAILS, str(exc))
        return
    em.emit("decompose:condition-a", Verdict.HOLDS, "")
    em.emit("decompose:condition-b", Verdict.HOLDS, "")
    em.emit("decompose:condition-c", Verdict.HOLDS, "")
    em.from_bool("decompose:leibniz", dec.leibniz_ok)
    em.from_bool("decompose:tau-central", dec.tau_central_ok)
    em.from_bool("decompose:tau-kills-pn", dec.tau_kills_pn_ok)
    em.fact("decompose:delta", _fmt_matrix(dec.delta.matrix))
    em.fact("decompose:tau", _fmt_matrix(dec.tau.matrix))
    em.fact("decompose:normalizer", _fmt_matrix(dec.normalizer.matrix))


def _cmd_fosner(args, em: Emitter):
    A = _load_algebra(args)
    n = args.n or 2
    k = args.k
    m = n + k * (n - 1)
    ok = ltmod.fosner_inclusion(A, n, k, budget=args.budget or 10 ** 6)
    em.from_bool(
        "fosner:inclusion", ok, f"Lie-{n} space inside Lie-{m} space (k = {k})"
    )


def _cmd_search(args, em: Emitter):
    A = _load_algebra(args)
    n = args.n or 2
    if args.mode == "verify":
        if not args.map:
            raise CliError("search --mode verify needs --map <path> (tmap)")
        ring = finmod.FiniteRing(A)
        T = load_map_table(args.map, ring)
        rep = finmod.verify_lie_n_identity(
            A, T, n, budget=args.budget or 10 ** 7, seed=args.seed
        )
        detail = f"mode {rep.mode}, checked {rep.checked}"
        if rep.witness:
            ws = ", ".join(_fmt_vec(A.field, w) for w in rep.witness)
            detail += f"; witness ({ws}), residual {_fmt_vec(A.field, rep.residual)}"
        em.emit("search:lie-identity", rep.status, detail)
    elif args.mode == "defect":
        if not args.map:
            raise CliError("search --mode defect needs --map <path> (tmap)")
        ring = finmod.FiniteRing(A)
        T = load_map_table(args.map, ring)
        rep = finmod.almost_additivity_defect(A, T, budget=args.budget or 10 ** 7)
        detail = f"checked {rep.checked} pairs"
        if rep.witness:
            a, b, defect = rep.witness
            detail += (
                f"; non-central defect {_fmt_vec(A.field, defect)} at"
                f" a = {_fmt_vec(A.field, a)}, b = {_fmt_vec(A.field, b)}"
            )
        em.from_bool("search:almost-additive", rep.all_central, detail)
    elif args.mode == "converse":
        if not args.map:
            raise CliError("search --mode converse needs --map <path> (lmap, the derivation)")
        ctx = _context(A, args)
        delta = load_linear_map(args.map, A)
        T = finmod.construct_converse_example(
            ctx, delta, n, seed=args.seed, budget=args.budget or 10 ** 7
        )
        em.emit("search:converse-identity", Verdict.HOLDS, "verified exhaustively")
        rep = finmod.almost_additivity_defect(A, T)
        em.from_bool("search:converse-defect-central", rep.all_central)
        em.fact("search:converse-additive", str(T.is_additive()))
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(dump_map_table(T))
            em.fact("search:converse-table", args.out)
    elif args.mode == "exhaust":
        rep = finmod.pruned_exhaustive_search(A, n, budget=args.budget or 10 ** 6)
        tally = {f"lie={k[0]},almost-additive={k[1]}": v for k, v in rep.tally.items()}
        em.fact("search:exhaust-tally", str(tally))
        em.fact(
            "search:exhaust-coverage",
            f"{rep.leaves} leaves, {rep.covered}/{rep.total} tables covered",
        )
        em.from_bool(
            "search:exhaust-complete",
            True if rep.complete else None,
            "" if rep.complete else f"budget hit after {rep.nodes} nodes",
        )
        contradiction = rep.tally.get((True, False), 0)
        em.from_bool(
            "search:exhaust-no-contradiction",
            contradiction == 0,
            f"{contradiction} tables satisfy the identity but are not almost additive",
        )
    else:
        raise CliError(f"unknown search mode {args.mode!r}")


def _cmd_catalog(args, em: Emitter):
    if args.export:
        field = _parse_field(args.field)
        try:
            A = load_catalog(args.export, field)
        except AlgebraError as exc:
            raise CliError(str(exc)) from exc
        data = serialize_saf(A)
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(data)
            em.fact("catalog:export", args.out)
        else:
            sys.stdout.write(data.decode("utf-8"))
        return
    for name in CATALOG_NAMES:
        A = load_catalog(name, QQ)
        rep = classify_identities(A)
        kind = (
            "associative"
            if rep.associative
            else "alternative" if rep.alternative else "nonassociative"
        )
        em.fact(f"catalog:{name}", f"dim {A.dim}, {kind}")


def build_parser() -> _Parser:
    parser = _Parser(prog="altrings", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, peirce=False):
        p.add_argument("--catalog", choices=sorted(CATALOG_NAMES))
        p.add_argument("--file")
        p.add_argument("--field", default="Q", help="Q or GFp:<p>")
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("text", "tsv"), default="text")
        if peirce:
            p.add_argument("--idem", help="idempotent coordinates")

    p = sub.add_parser("info", help="field, dim, identities, center/nucleus dims")
    common(p)

    p = sub.add_parser("check", help="identity classes, torsion, primality")
    common(p)
    p.add_argument(
        "--prop",
        action="append",
        choices=("identities", "associative", "alternative", "flexible"),
    )
    p.add_argument("--torsion", action="append", type=int, metavar="K")
    p.add_argument("--prime", action="store_true")

    p = sub.add_parser("peirce", help="decomposition, relations, conditions, commutants")
    common(p, peirce=True)
    p.add_argument("--relations", action="store_true")
    p.add_argument("--conditions", action="store_true")
    p.add_argument("--commutant", action="store_true")

    p = sub.add_parser("derive", help="derivation / Lie-n derivation spaces")
    common(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--basis", action="store_true")

    p = sub.add_parser("decompose", help="split a Lie-n derivation into delta + tau")
    common(p, peirce=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--map", help="lmap matrix file")

    p = sub.add_parser("fosner", help="Lie-n space inside the Lie-(n+k(n-1)) space")
    common(p)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("search", help="finite value-table modes")
    common(p, peirce=True)
    p.add_argument(
        "--mode", required=True, choices=("verify", "defect", "converse", "exhaust")
    )
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--map", help="tmap table (verify/defect) or lmap derivation (converse)")
    p.add_argument("--out", help="write the constructed table here")

    p = sub.add_parser("catalog", help="list built-in algebras or export one")
    common(p)
    p.add_argument("--export", metavar="NAME")
    p.add_argument("--out")

    return parser


_HANDLERS = {
    "info": _cmd_info,
    "check": _cmd_check,
    "peirce": _cmd_peirce,
    "derive": _cmd_derive,
    "decompose": _cmd_decompose,
    "fosner": _cmd_fosner,
    "search": _cmd_search,
    "catalog": _cmd_catalog,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        em = Emitter(args.format, sys.stdout)
        _HANDLERS[args.command](args, em)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SafError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (FieldError, AlgebraError, PeirceError, BudgetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return em.exit_code()


if __name__ == "__main__":
    sys.exit(main())
