"""Command-line entry point.

Subcommands: featurize (raw session JSON -> dataset CSV), eval
(cross-validated EER tables, optionally with impostor data), stats
(total-time five-number summaries), serve (ingest service + capture
UI), export (dataset CSV out of a session store). KEYDYN_SEED provides
the seed when --seed is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from keydyn.algorithms import ALGORITHM_ORDER
from keydyn.dataset import (
    Dataset,
    DatasetFormatError,
    DuplicateSampleError,
    LabeledSample,
    SubjectMeta,
    concat_datasets,
    parse_dataset_csv,
    serialize_dataset_csv,
)
from keydyn.classifiers import MissingClassError
from keydyn.evaluation import (
    compute_eer,
    cross_validate,
    impostor_evaluate,
    make_folds,
)
from keydyn.features import CONCAT_ID, extract_features
from keydyn.phrases import PHRASES
from keydyn.report import ResultCell, render_csv, render_text
from keydyn.stats import dataset_stats, stats_csv
from keydyn.store import SessionStore, SubmissionError, events_from_wire


def _default_seed() -> int:
    return int(os.environ.get("KEYDYN_SEED", "0"))


def _load_dataset(paths: list[str], selector: str) -> Dataset:
    parsed = [parse_dataset_csv(Path(p).read_text()) for p in paths]
    if selector == "concat":
        if len(parsed) == 1:
            if parsed[0].phrase_id != CONCAT_ID:
                raise DatasetFormatError(
                    "concat evaluation needs a concat-layout file or both phrase files"
                )
            return parsed[0]
        if len(parsed) == 2:
            return concat_datasets(parsed[0], parsed[1])
        raise DatasetFormatError("concat evaluation takes one or two input files")
    if len(parsed) != 1:
        raise DatasetFormatError(f"{selector} evaluation takes exactly one input file")
    if parsed[0].phrase_id != selector:
        raise DatasetFormatError(
            f"input file holds {parsed[0].phrase_id!r} data, expected {selector!r}"
        )
    return parsed[0]


def cmd_featurize(args: argparse.Namespace) -> int:
    raw_dir = Path(args.raw_dir)
    files = sorted(raw_dir.glob("*.json"))
    if not files:
        print(f"no .json session files in {raw_dir}", file=sys.stderr)
        return 2

    rejects: list[str] = []
    samples: list[LabeledSample] = []
    seen: set[tuple[int, int, str]] = set()
    for path in files:
        try:
            record = json.loads(path.read_text())
            subject = record["subject"]
            meta = SubjectMeta(
                subject_id=int(subject["subject_id"]),
                gender=subject["gender"],
                age_group=subject["age_group"],
                birth_year=int(subject["birth_year"]),
            )
            phrase_id = record["phrase_id"]
            spec = PHRASES[phrase_id]
            events = events_from_wire(record["events"])
            features = extract_features(events, spec)
            sample = LabeledSample(
                meta=meta, session=int(record["session_index"]), features=features
            )
            if sample.key in seen:
                raise DuplicateSampleError(*sample.key)
            seen.add(sample.key)
        except (SubmissionError, DuplicateSampleError, ValueError, KeyError) as exc:
            reason = getattr(exc, "reason", None) or str(exc)
            rejects.append(f"{path.name}: {reason}")
            continue
        samples.append(sample)

    if args.phrase:
        phrase_id = args.phrase
        samples = [s for s in samples if s.features.phrase_id == phrase_id]
    else:
        present = sorted({s.features.phrase_id for s in samples})
        if len(present) > 1:
            print(
                f"directory mixes phrases {present}; pass --phrase", file=sys.stderr
            )
            return 2
        phrase_id = present[0] if present else None

    log_path = Path(args.output).with_suffix(".rejects.log")
    log_path.write_text("".join(line + "\n" for line in rejects))
    for line in rejects:
        print(f"rejected {line}", file=sys.stderr)

    if not samples:
        print("no accepted sessions; nothing written", file=sys.stderr)
        return 2
    dataset = Dataset(phrase_id=phrase_id, samples=samples)
    Path(args.output).write_text(serialize_dataset_csv(dataset))
    print(f"wrote {len(samples)} samples to {args.output} ({len(rejects)} rejected)")
    return 0


def _algo_options(args: argparse.Namespace) -> dict:
    options: dict = {
        "C": args.svm_c,
        "max_epochs": args.epochs,
        "symmetric_init": args.symmetric_init,
    }
    if args.gamma is not None:
        options["gamma"] = args.gamma
    return options


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        dataset = _load_dataset(args.data, args.dataset)
        impostors = (
            _load_dataset(args.impostor, args.dataset) if args.impostor else None
        )
    except (DatasetFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    algos = list(ALGORITHM_ORDER) if args.algo == "all" else [args.algo]
    options = _algo_options(args)
    cells: list[ResultCell] = []
    for name in algos:
        try:
            if impostors is not None:
                result = impostor_evaluate(
                    dataset, impostors, name, seed=args.seed, options=options
                )
                cells.append(
                    ResultCell(
                        algorithm=name,
                        dataset=args.dataset,
                        eer_percent=result.eer_percent,
                        impostor_error_percent=result.impostor_error_percent,
                        converged=result.converged,
                    )
                )
            else:
                folds = make_folds(dataset, k=5, seed=args.seed)
                run = cross_validate(
                    dataset, name, folds, seed=args.seed, options=options
                )
                scores, labels = run.score_label_pairs()
                cells.append(
                    ResultCell(
                        algorithm=name,
                        dataset=args.dataset,
                        eer_percent=compute_eer(scores, labels),
                        converged=run.converged,
                    )
                )
        except MissingClassError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 3
        except RuntimeError as exc:
            # per-cell failure: keep the table, mark the cell
            cells.append(
                ResultCell(
                    algorithm=name,
                    dataset=args.dataset,
                    eer_percent=None,
                    converged=False,
                    failed=str(exc),
                )
            )

    table = render_text(cells, impostor_mode=impostors is not None)
    print(table, end="")
    if args.output:
        Path(args.output).write_text(render_csv(cells))
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        dataset = _load_dataset(args.data, args.dataset)
    except (DatasetFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    csv_text = stats_csv(dataset_stats(dataset))
    if args.output:
        Path(args.output).write_text(csv_text)
    else:
        print(csv_text, end="")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from keydyn.service import create_app

    app = create_app(args.store, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    store = SessionStore(args.store)
    try:
        csv_text = store.export_csv(phrase_id=args.phrase, deidentify=args.deidentify)
    except SubmissionError as exc:
        print(f"error: {exc.reason}: {exc}", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(csv_text)
    else:
        print(csv_text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keydyn", description="keystroke-dynamics age-group toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("featurize", help="convert raw session JSON files to a dataset CSV")
    p.add_argument("raw_dir")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--phrase", choices=list(PHRASES))
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("eval", help="cross-validated EER table")
    p.add_argument("data", nargs="+", help="dataset CSV (two files for --dataset concat)")
    p.add_argument("--algo", default="all", choices=["all", *ALGORITHM_ORDER])
    p.add_argument(
        "--dataset", default="turkish", choices=["turkish", "password", "concat"]
    )
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--impostor", nargs="+", help="impostor dataset CSV")
    p.add_argument("-o", "--output", help="also write report CSV here")
    p.add_argument("--svm-c", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--symmetric-init", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="total typing time five-number summaries")
    p.add_argument("data", nargs="+")
    p.add_argument(
        "--dataset", default="turkish", choices=["turkish", "password", "concat"]
    )
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="run the ingest service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store", required=True)
    p.add_argument("--static", default=None, help="capture UI bundle directory")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="export a session store as dataset CSV")
    p.add_argument("--store", required=True)
    p.add_argument("--phrase", choices=list(PHRASES))
    p.add_argument("--deidentify", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
