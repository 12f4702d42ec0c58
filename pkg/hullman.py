#!/usr/bin/env python3
"""
Hullsmith Management Tool (hullman.py)
Builds GRS codes with prescribed Hermitian hulls, applies the hull propagation
rules and emits MDS EAQECC parameter tables.

Exit codes: 0 ok, 1 verification failure, 2 bad parameters or unmet
precondition, 3 a proven guarantee failed (a bug report bundle is written).
"""
import argparse
import json
import logging
import os
import sys
import traceback
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path

# Add the current directory to Python path so we can import our modules
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from codes.errors import GuaranteeViolation, HullsmithError, OutOfRange, VerificationFailed  # noqa: E402
from codes.families import FAMILY_ALIASES, FamilySpec, build_family_code, gram_census  # noqa: E402
from codes.grs import min_distance  # noqa: E402
from dependencies.config import Settings, get_settings  # noqa: E402
from dependencies.database import (  # noqa: E402
    create_catalog_tables,
    create_database_engine,
    create_session_factory,
    get_db_session,
)
from dependencies.services import (  # noqa: E402
    get_catalog_service,
    get_code_service,
    get_table_service,
    get_verify_service,
    get_witness_service,
)
from services.catalog_service import KINDS  # noqa: E402
from services.code_service import RULES  # noqa: E402
from services.table_service import SUMMARY_COLUMNS, TUPLE_COLUMNS, render_csv, render_json  # noqa: E402
from services.verify_service import SUITES  # noqa: E402

logger = logging.getLogger("hullman")

LOG_FORMAT = "%(asctime)s [%(levelname)8s] %(name)s: %(message)s"
SWEEP_COLUMNS = ["family", "q", "h", "n", "k", "t", "l_formula", "hull_computed", "mds_certificate", "census"]
FAMILY_CHOICES = sorted(FAMILY_ALIASES)


def status(message: str, data_on_stdout: bool = False) -> None:
    """Human status line; kept off stdout when stdout carries CSV/JSON"""
    print(message, file=sys.stderr if data_on_stdout else sys.stdout)


def emit(text: str) -> None:
    sys.stdout.write(text)


@contextmanager
def open_catalog(settings: Settings):
    """Yield a CatalogService bound to the configured catalog"""
    engine = create_database_engine(settings)
    create_catalog_tables(engine)
    sessions = get_db_session(create_session_factory(engine))
    session = next(sessions)
    try:
        yield get_catalog_service(session, settings)
    finally:
        sessions.close()
        engine.dispose()


def record(settings: Settings, args, kind: str, payloads: list) -> int:
    if getattr(args, "no_catalog", False) or not payloads:
        return 0
    with open_catalog(settings) as catalog:
        return catalog.record_many(kind, payloads)


def write_bug_report(settings: Settings, argv: list[str], args, exc: Exception) -> Path:
    """JSON bundle with the command, the input descriptor and the failure"""
    descriptor = getattr(exc, "descriptor", None)
    code_path = getattr(args, "code", None)
    if descriptor is None and code_path and Path(code_path).exists():
        descriptor = json.loads(Path(code_path).read_text(encoding="utf-8"))
    bundle = {
        "command": ["hullman.py", *argv],
        "arguments": {k: v for k, v in vars(args).items() if k != "handler"} if args else {},
        "input_descriptor": descriptor,
        "error": type(exc).__name__,
        "message": str(exc),
        "traceback": traceback.format_exception(type(exc), exc, exc.__traceback__),
    }
    stamp = datetime.now(timezone.utc).strftime("%Y%m%d_%H%M%S")
    target = Path(settings.bug_report_dir) / f"hullsmith_bug_{stamp}.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(bundle, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return target


def default_out(family: FamilySpec, k: int) -> str:
    h = "" if family.h is None else f"_h{family.h}"
    return f"{family.family}_q{family.q}{h}_k{k}.json"


def cmd_build(args, settings: Settings) -> int:
    """Build a family code and write its descriptor"""
    service = get_code_service(settings)
    family = FamilySpec(args.family, args.q, args.h)
    status(f"🔄 Building {family.label} over GF({args.q}²) with k={args.k}...")
    outcome = service.build(args.family, args.q, args.k, args.h, args.t_bound)
    summary = service.summary(outcome.code)
    document = {**service.outcome_document(outcome), "summary": summary}
    target = service.save(document, args.out or default_out(family, args.k))

    status(f"✅ [{summary['n']},{summary['k']}] code written to {target}")
    status(f"   Hermitian hull: {summary['hull_hermitian']} (bound {outcome.predicted_hull_lb}, {', '.join(outcome.cases)})")
    status(f"   Euclidean hull: {summary['hull_euclidean']}")
    status(f"   Distance: {summary['distance']} via {summary['certificate']}{' (MDS)' if summary['mds'] else ''}")
    if outcome.flags:
        status(f"⚠️  Flags: {', '.join(outcome.flags)}")
    record(settings, args, "code", [outcome.code.descriptor])
    record(settings, args, "outcome", [outcome.record])
    return 0


def cmd_rule(args, settings: Settings) -> int:
    """Apply one propagation rule to a stored code"""
    service = get_code_service(settings)
    code = service.load(args.code)
    status(f"🔄 Applying {args.rule} to [{code.length},{code.k}] from {args.code}...")
    outcome = service.apply_rule(
        code,
        args.rule,
        lam=args.lam,
        lam_infty=args.lam_infty,
        target_hull=args.target_hull,
        direction=args.direction,
        at=args.at,
    )
    document = service.outcome_document(outcome)
    out = args.out or f"{Path(args.code).stem}_{args.rule}.json"
    target = service.save(document, out)

    predicted = outcome.exact_hull if outcome.exact_hull is not None else f"≥ {outcome.predicted_hull_lb}"
    status(f"✅ [{outcome.code.length},{outcome.code.k}] code written to {target}")
    status(f"   Hull: predicted {predicted}, computed {outcome.hull_dim} (source hull {outcome.source_hull})")
    if outcome.cases:
        status(f"   Cases: {', '.join(outcome.cases)}")
    if outcome.flags:
        status(f"⚠️  Flags: {', '.join(outcome.flags)}")
    record(settings, args, "outcome", [outcome.record])
    return 0


def cmd_tables(args, settings: Settings) -> int:
    """Emit the EAQECC enumeration or its MDS summary"""
    service = get_table_service(settings)
    status(f"🔍 Enumerating family {args.family} for q={args.q}...", data_on_stdout=True)
    tuples = service.enumerate(args.q, args.family, args.h, args.t_bound)

    if args.summary:
        rows = service.summary_rows(args.q, args.family, args.h, tuples)
        emit(render_json(rows) if args.format == "json" else render_csv(SUMMARY_COLUMNS, rows))
        status(f"📋 {len(rows)} summary rows", data_on_stdout=True)
        return 0

    witnessed = set()
    report = None
    if args.witness:
        status("🔄 Witnessing tuples by construction...", data_on_stdout=True)
        report = get_witness_service(settings).witness(tuples, args.q, args.family, args.h)
        witnessed = report.witnessed
    rows = service.tuple_rows(tuples, args.q, args.family, args.h, witnessed)
    emit(render_json(rows) if args.format == "json" else render_csv(TUPLE_COLUMNS, rows))
    status(f"📋 {len(rows)} tuples", data_on_stdout=True)
    record(settings, args, "eaqecc", rows)

    if report is not None:
        status(
            f"   witnessed {len(report.witnessed)}, unwitnessable {len(report.unwitnessable)}, "
            f"failed {len(report.failed)}",
            data_on_stdout=True,
        )
        for note in report.notes:
            status(f"💡 {note}", data_on_stdout=True)
        if not report.ok:
            raise VerificationFailed(f"{len(report.failed)} witnessable tuples not reproduced: {sorted(report.failed)}")
    return 0


def cmd_verify(args, settings: Settings) -> int:
    """Run one acceptance suite; exit 1 on any failed check"""
    status(f"🔍 Running {args.suite} for q={args.q}...", data_on_stdout=True)
    result = get_verify_service(settings).run(args.suite, args.q, args.h, args.family, args.trials)
    emit(json.dumps(result.as_dict(), indent=2, sort_keys=True, default=str) + "\n")
    if not result.passed:
        failed = [c.name for c in result.checks if not c.passed]
        status(f"❌ {args.suite}: {len(failed)} failed checks", data_on_stdout=True)
        return VerificationFailed.exit_code
    status(f"✅ {args.suite}: all {len(result.checks)} checks passed", data_on_stdout=True)
    return 0


def cmd_families(args, settings: Settings) -> int:
    """Family descriptors, hull sweeps or the literature reference table"""
    if args.reference:
        rows = get_table_service(settings).reference_rows()
        columns = list(rows[0]) if rows else []
        emit(render_json(rows) if args.format == "json" else render_csv(columns, rows))
        return 0
    if args.family is None:
        raise OutOfRange("families needs --family unless --reference is given")

    family = FamilySpec(args.family, args.q, args.h)
    if not args.sweep:
        descriptor = {**family.descriptor, "n": family.n, "exceptional_pairs": [list(p) for p in family.exceptional_pairs]}
        emit(json.dumps(descriptor, indent=2, sort_keys=True) + "\n")
        return 0

    params = get_code_service(settings).search_params
    rows = []
    status(f"🔄 Sweeping {family.label} over k = 1..{family.n // 2}...", data_on_stdout=True)
    for k in range(1, family.n // 2 + 1):
        try:
            outcome = build_family_code(family, k, params, args.t_bound)
        except OutOfRange:
            continue
        rows.append(
            {
                "family": family.number,
                "q": family.q,
                "h": "" if family.h is None else family.h,
                "n": family.n,
                "k": k,
                "t": outcome.cases[0].split("=")[1],
                "l_formula": outcome.predicted_hull_lb,
                "hull_computed": outcome.hull_dim,
                "mds_certificate": min_distance(outcome.code, "structural").mode,
                "census": len(gram_census(outcome.code)),
            }
        )
    emit(render_json(rows) if args.format == "json" else render_csv(SWEEP_COLUMNS, rows))
    status(f"✅ {len(rows)} codes checked against the hull bound", data_on_stdout=True)
    return 0


def cmd_catalog(args, settings: Settings) -> int:
    """Inspect or initialize the results catalog"""
    if args.action == "init":
        engine = create_database_engine(settings)
        create_catalog_tables(engine)
        engine.dispose()
        status(f"✅ Catalog ready at {settings.catalog}")
        return 0
    with open_catalog(settings) as catalog:
        if args.action == "count":
            emit(json.dumps(catalog.count(), indent=2, sort_keys=True) + "\n")
        else:
            emit(json.dumps(catalog.list_entries(args.kind, args.limit), indent=2, sort_keys=True) + "\n")
    return 0


def show_help():
    """Show detailed help information"""
    help_text = """
Hullsmith Management Tool

USAGE:
    uv run python hullman.py <command> [options]

COMMANDS:
    build       Build a family code (full-field, coset-h, coset-2h) and write its descriptor
    rule        Apply a propagation rule to a descriptor file
    tables      Emit the MDS EAQECC enumeration (CSV or JSON)
    verify      Run an acceptance suite (lemma-q22, lemma-h1, lemma-2h1, prop-grs1,
                prop-3, prop-4, theorem-grs1, tables)
    families    Family descriptors, hull sweeps and the reference table
    catalog     List, count or initialize the results catalog

EXAMPLES:
    uv run python hullman.py build --q 4 --family full-field --k 4 --out ff_q4.json
    uv run python hullman.py rule reduce --code ff_q4.json --target-hull 0
    uv run python hullman.py rule extend-length --code ff_q4.json --lambda 1
    uv run python hullman.py tables --q 8 --family 1
    uv run python hullman.py tables --q 9 --h 2 --family 3 --witness
    uv run python hullman.py verify lemma-q22 --q 5
    uv run python hullman.py families --q 5 --family full-field --sweep
    uv run python hullman.py catalog count

TABLE COLUMNS:
    tuples:  q,family,h,n,k_logical,d,c,mds,shape_id,witnessed
    summary: family,q,h,n,t,branch,d_min,d_max,c_formula,c_values
    sweep:   family,q,h,n,k,t,l_formula,hull_computed,mds_certificate,census

    Field elements are always written as integer representatives.

ENVIRONMENT:
    HULLSMITH_CATALOG       Catalog path or SQLAlchemy URL (default hullsmith_catalog.db)
    HULLSMITH_SEARCH_SEED   Seed for the randomized multiplier search
    HULLSMITH_LOG_LEVEL     Logging level (default INFO)

EXIT CODES:
    0 ok, 1 verification failure, 2 bad parameters, 3 guarantee violation
"""
    print(help_text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Hullsmith: GRS codes with prescribed Hermitian hulls and MDS EAQECC tables",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  uv run python hullman.py build --q 4 --family full-field --k 4
  uv run python hullman.py rule increase-dim --code ff_q4_k3.json
  uv run python hullman.py tables --q 11 --h 3 --family 2 --format json
  uv run python hullman.py verify theorem-grs1 --q 4
        """,
    )
    parser.add_argument("--no-catalog", action="store_true", help="Do not record results in the catalog")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="Build a family code")
    build.add_argument("--q", type=int, required=True)
    build.add_argument("--h", type=int)
    build.add_argument("--family", choices=FAMILY_CHOICES, required=True)
    build.add_argument("--k", type=int, required=True)
    build.add_argument("--out")
    build.add_argument("--t-bound", choices=["ceil", "floor"])
    build.set_defaults(handler=cmd_build)

    rule = sub.add_parser("rule", help="Apply a propagation rule")
    rule.add_argument("rule", choices=RULES)
    rule.add_argument("--code", required=True, help="Descriptor file written by build or rule")
    rule.add_argument("--lambda", dest="lam", type=int, help="Subfield scalar (integer rep); omit to cancel the corner")
    rule.add_argument("--lambda-infty", dest="lam_infty", type=int, help="∞-side scalar for extend-length-both")
    rule.add_argument("--target-hull", type=int)
    rule.add_argument("--direction", choices=["up", "down"], default="up")
    rule.add_argument("--at", choices=["infty", "zero"], default="infty")
    rule.add_argument("--out")
    rule.set_defaults(handler=cmd_rule)

    tables = sub.add_parser("tables", help="Emit the EAQECC enumeration")
    tables.add_argument("--q", type=int, required=True)
    tables.add_argument("--h", type=int)
    tables.add_argument("--family", choices=FAMILY_CHOICES, required=True)
    tables.add_argument("--witness", action="store_true", help="Certify each tuple by construction (q ≤ 9)")
    tables.add_argument("--summary", action="store_true", help="One row per (t, branch) distance range")
    tables.add_argument("--format", choices=["csv", "json"], default="csv")
    tables.add_argument("--t-bound", choices=["ceil", "floor"], default="ceil")
    tables.set_defaults(handler=cmd_tables)

    verify = sub.add_parser("verify", help="Run an acceptance suite")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("--q", type=int, required=True)
    verify.add_argument("--h", type=int)
    verify.add_argument("--family", choices=FAMILY_CHOICES)
    verify.add_argument("--trials", type=int, default=50)
    verify.set_defaults(handler=cmd_verify)

    families = sub.add_parser("families", help="Family descriptors and hull sweeps")
    families.add_argument("--q", type=int, default=0)
    families.add_argument("--h", type=int)
    families.add_argument("--family", choices=FAMILY_CHOICES)
    families.add_argument("--sweep", action="store_true")
    families.add_argument("--reference", action="store_true", help="Known MDS EAQECC families from the literature")
    families.add_argument("--t-bound", choices=["ceil", "floor"])
    families.add_argument("--format", choices=["csv", "json"], default="csv")
    families.set_defaults(handler=cmd_families)

    catalog = sub.add_parser("catalog", help="Results catalog")
    catalog.add_argument("action", choices=["list", "count", "init"])
    catalog.add_argument("--kind", choices=KINDS)
    catalog.add_argument("--limit", type=int)
    catalog.set_defaults(handler=cmd_catalog)
    return parser


def main(argv: list[str] | None = None, settings: Settings | None = None) -> int:
    """Main CLI entry point"""
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] == "help":
        show_help()
        return 0

    settings = settings or get_settings()
    logging.basicConfig(level=settings.log_level.upper(), format=LOG_FORMAT, stream=sys.stderr)
    args = build_parser().parse_args(argv)

    try:
        return args.handler(args, settings)
    except GuaranteeViolation as exc:
        logger.error("Guarantee violated: %s", exc)
        target = write_bug_report(settings, argv, args, exc)
        status(f"❌ {type(exc).__name__}: {exc}", data_on_stdout=True)
        status(f"📋 Bug report written to {target}", data_on_stdout=True)
        return exc.exit_code
    except HullsmithError as exc:
        status(f"❌ {type(exc).__name__}: {exc}", data_on_stdout=True)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
