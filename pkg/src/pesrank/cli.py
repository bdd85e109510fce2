"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable corpus, missing
model files, malformed rank files, ...), 3 internal error. Diagnostics are
one-line messages on stderr, never stack traces.

Environment fallbacks (a flag always wins over the environment):
  PESRANK_MODEL_DIR  default for --model-dir
  PESRANK_ADDR       default for serve --addr
  PESRANK_GAMMA      default for preprocess --gamma
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import evaluate as evaluate_mod
from . import model as model_mod
from . import rank
from .evaluate import EvalError
from .model import IngestError, Model, ModelError, TrainConfig
from .rank import ParameterError
from .service import build_response, to_json_bytes
from .tweaks import request_tweaks


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; this interface reserves 2
    for data errors, so route usage problems through an exception instead."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _env_default(value, env_name, fallback):
    if value is not None:
        return value
    env = os.environ.get(env_name)
    if env:
        return env
    return fallback


def _require_model_dir(args, parser):
    model_dir = _env_default(args.model_dir, "PESRANK_MODEL_DIR", None)
    if not model_dir:
        parser.error("--model-dir is required (or set PESRANK_MODEL_DIR)")
    return model_dir


def _load_history_file(path):
    """TSV rows of password<TAB>frequency for the reuse tweak source."""
    history = []
    with open(path, "r", encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise EvalError(f"{path}:{n}: expected password<TAB>frequency")
            pw, freq_text = parts
            try:
                freq = float(freq_text)
            except ValueError:
                raise EvalError(f"{path}:{n}: frequency is not a number") from None
            if not (0.0 < freq <= 1.0):
                raise EvalError(f"{path}:{n}: frequency must be in (0, 1]")
            history.append((pw, freq))
    total = sum(f for _, f in history)
    if total > 1.0 + 1e-9:
        raise EvalError(f"{path}: frequencies sum to {total}, must be at most 1")
    return history or None


def _parse_budgets(text):
    budgets = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            budgets.append(int(float(piece)))
        except ValueError:
            raise EvalError(f"bad budget value: {piece}") from None
    if not budgets:
        raise EvalError("no budgets given")
    return budgets


def _parse_addr(addr):
    host, sep, port_text = addr.rpartition(":")
    if not sep or not host:
        raise ModelError(f"bad address {addr!r}, expected HOST:PORT")
    try:
        port = int(port_text)
    except ValueError:
        raise ModelError(f"bad port in address {addr!r}") from None
    return host, port


def build_parser() -> _Parser:
    parser = _Parser(prog="pesrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="count dimension tokens from a leak corpus")
    p.add_argument("corpus", help="text corpus: password or username<TAB>password per line")
    p.add_argument("--model-dir", default=None)
    p.add_argument("--min-length", type=int, default=model_mod.DEFAULT_MIN_LENGTH)
    p.add_argument("--no-enrich", action="store_true", help="skip the numeric-token enrichment pass")
    p.add_argument("--no-ascii-filter", action="store_true", help="keep passwords with non-printable-ASCII bytes")
    p.add_argument("--epsilon", type=float, default=model_mod.EPSILON)

    p = sub.add_parser("enrich", help="add the synthetic numeric tokens to a trained model")
    p.add_argument("--model-dir", default=None)
    p.add_argument("--epsilon", type=float, default=model_mod.EPSILON)

    p = sub.add_parser("preprocess", help="build the merged rank lists for a trained model")
    p.add_argument("--model-dir", default=None)
    p.add_argument("--gamma", type=float, default=None)

    p = sub.add_parser("estimate", help="estimate the rank of one password (JSON on stdout)")
    p.add_argument("--model-dir", default=None)
    p.add_argument("--password", required=True)
    p.add_argument("--username", default=None)
    p.add_argument("--history-file", default=None, help="TSV password<TAB>frequency reuse history")

    p = sub.add_parser("explain", help="human-readable strength message for one password")
    p.add_argument("--model-dir", default=None)
    p.add_argument("--password", required=True)
    p.add_argument("--username", default=None)
    p.add_argument("--history-file", default=None)

    p = sub.add_parser("oracle", help="exhaustively cross-check rank bounds on a small model")
    p.add_argument("--model-dir", default=None)

    p = sub.add_parser("eval-cdf", help="guessing-curve points from a rank file")
    p.add_argument("--ranks", required=True, help="TSV id<TAB>rank (-5 marks not-in-model)")
    p.add_argument("--out", required=True, help="output TSV budget<TAB>fraction")
    p.add_argument(
        "--budgets",
        default=",".join(str(10**k) for k in range(0, 19)),
        help="comma-separated guess budgets",
    )

    p = sub.add_parser("eval-metrics", help="over/accurate/under rates of one rank file against another")
    p.add_argument("--alg", required=True, help="rank file under evaluation")
    p.add_argument("--ref", required=True, help="reference rank file")
    p.add_argument("--out", default=None, help="also write the JSON result here")

    p = sub.add_parser("serve", help="run the HTTP estimation service")
    p.add_argument("--model-dir", default=None)
    p.add_argument("--addr", default=None, help="bind address HOST:PORT")
    p.add_argument("--cors-origin", action="append", default=None, help="allowed CORS origin (repeatable)")

    return parser


def _cmd_train(args, parser):
    model_dir = _require_model_dir(args, parser)
    config = TrainConfig(
        min_length=args.min_length,
        ascii_only=not args.no_ascii_filter,
        enrichment=not args.no_enrich,
        epsilon=args.epsilon,
    )
    model = model_mod.train(args.corpus, config)
    model.save(model_dir)
    skipped = model.skipped
    print(
        f"trained on {model.training_population} passwords "
        f"(skipped {skipped.total}: {skipped.charset} charset, {skipped.length} length); "
        f"volume {model.volume()}; saved to {model_dir}"
    )
    return 0


def _cmd_enrich(args, parser):
    model_dir = _require_model_dir(args, parser)
    model = Model.load(model_dir)
    model.config.epsilon = args.epsilon
    model.enrich()
    model.normalize()
    model.merged = None
    merged_path = os.path.join(model_dir, model_mod.MERGED_FILE)
    if os.path.exists(merged_path):
        os.remove(merged_path)
    model.save(model_dir)
    print(f"enrichment applied; volume {model.volume()}; merged lists cleared")
    return 0


def _cmd_preprocess(args, parser):
    model_dir = _require_model_dir(args, parser)
    gamma = float(_env_default(args.gamma, "PESRANK_GAMMA", model_mod.DEFAULT_GAMMA))
    model = Model.load(model_dir)
    rank.preprocess(model, gamma=gamma)
    model.save(model_dir)
    merged = model.merged
    print(
        f"merged lists built: {merged.entry_count()} entries "
        f"(A {len(merged.a.values)}, B {len(merged.b.values)}), gamma {gamma}"
    )
    return 0


def _load_for_estimate(args, parser):
    model_dir = _require_model_dir(args, parser)
    model = Model.load(model_dir)
    if model.merged is None:
        raise ModelError(f"model in {model_dir} has no merged lists; run preprocess first")
    history = _load_history_file(args.history_file) if args.history_file else None
    tweaks = request_tweaks(model, args.username, history)
    return model, tweaks


def _cmd_estimate(args, parser):
    model, tweaks = _load_for_estimate(args, parser)
    est = rank.estimate_password(model, args.password, tweaks=tweaks)
    payload = build_response(model, args.password, est)
    sys.stdout.write(to_json_bytes(payload).decode("utf-8") + "\n")
    return 0


def _cmd_explain(args, parser):
    from .explain import explain, render_message

    model, tweaks = _load_for_estimate(args, parser)
    est = rank.estimate_password(model, args.password, tweaks=tweaks)
    explanation = explain(model, args.password, est)
    print(render_message(explanation, model.training_population))
    return 0


def _cmd_oracle(args, parser):
    model_dir = _require_model_dir(args, parser)
    model = Model.load(model_dir)
    if model.merged is None:
        raise ModelError(f"model in {model_dir} has no merged lists; run preprocess first")
    products = rank.population_products(model)
    asc = np.sort(products)
    queries = np.unique(products)[::-1].copy()
    lowers, uppers = rank.estimate_rank_batch(model.merged, queries)
    true_ranks = len(asc) - np.searchsorted(asc, queries, side="left")
    violations = int(np.count_nonzero((lowers > true_ranks) | (true_ranks > uppers)))
    ratio = float(np.max(uppers / lowers))
    gamma = model.merged.gamma
    bound = gamma ** 8
    print(
        f"checked {len(queries)} distinct products over volume {len(asc)}; "
        f"sandwich violations {violations}; max upper/lower {ratio:.6f} "
        f"(gamma^8 bound {bound:.6f})"
    )
    return 0 if violations == 0 else 3


def _cmd_eval_cdf(args, parser):
    ranks = evaluate_mod.read_rank_file(args.ranks)
    budgets = _parse_budgets(args.budgets)
    points = evaluate_mod.cdf(ranks.values(), budgets)
    evaluate_mod.write_curve(args.out, points)
    frac = evaluate_mod.not_in_model_fraction(ranks.values())
    print(f"wrote {len(points)} curve points to {args.out}; not_in_model fraction {frac!r}")
    return 0


def _cmd_eval_metrics(args, parser):
    alg = evaluate_mod.read_rank_file(args.alg)
    ref = evaluate_mod.read_rank_file(args.ref)
    result = evaluate_mod.compare(alg, ref)
    text = json.dumps(result, sort_keys=True)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0


def _cmd_serve(args, parser):
    import uvicorn

    from .service import create_app

    model_dir = _require_model_dir(args, parser)
    model = Model.load(model_dir)
    if model.merged is None:
        raise ModelError(f"model in {model_dir} has no merged lists; run preprocess first")
    addr = _env_default(args.addr, "PESRANK_ADDR", "127.0.0.1:8000")
    host, port = _parse_addr(addr)
    app = create_app(model, cors_origins=args.cors_origin)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "enrich": _cmd_enrich,
    "preprocess": _cmd_preprocess,
    "estimate": _cmd_estimate,
    "explain": _cmd_explain,
    "oracle": _cmd_oracle,
    "eval-cdf": _cmd_eval_cdf,
    "eval-metrics": _cmd_eval_metrics,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args, parser)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (ModelError, IngestError, EvalError, ParameterError, OSError, UnicodeDecodeError) as exc:
        print(f"pesrank {args.command}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"pesrank {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
