"""Command-line front end: parameter inference, order comparison, entropy
sweeps, simulation, and canned figure-reproduction bundles.

All commands emit CSV (optionally mirrored as JSON) with 12-significant-
digit formatting so outputs are diff-able goldens.  Exit codes: 0 success,
2 invalid configuration, 3 numeric-domain failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import comparison, entropy, inference, processes
from .core import (
    Alphabet,
    CountTable,
    WordIndex,
    count_words,
    hyper_from_fake_counts,
    read_sequence,
    uniform_hyper,
    word_string,
    write_sequence,
)
from .special import NumericDomainError

EXIT_BAD_CONFIG = 2
EXIT_NUMERIC = 3

OUT_DIR_ENV = "BAYESMC_OUT"


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    source: str | None
    input_path: str | None
    csv_column: str | None
    mode: str  # "average" or "sample"
    k_min: int
    k_max: int
    n_grid: tuple[int, ...]
    alpha: float
    fake_counts_path: str | None
    prior: str  # "uniform" or "penalty"
    confidence: float
    seed: int | None
    out_dir: Path
    fmt: str
    jobs: int
    density_points: int


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.12g}"
    return str(value)


def _write_rows(path: Path, fieldnames: list[str], rows: list[dict], fmt: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(fieldnames)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(f)) for f in fieldnames))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    if fmt == "json":
        mirror = path.with_suffix(".json")
        serializable = [
            {f: (None if (isinstance(row.get(f), float) and math.isinf(row[f]))
                 else row.get(f)) for f in fieldnames}
            for row in rows
        ]
        mirror.write_text(json.dumps(serializable, indent=1) + "\n", encoding="utf-8")


def _resolve_hmm(cfg: ExperimentConfig) -> processes.LabeledHMM:
    if cfg.source is None:
        raise ConfigError("a --source is required for this mode")
    builder = processes.BUILTIN_SOURCES.get(cfg.source)
    if builder is not None:
        return builder()
    if os.path.exists(cfg.source):
        return processes.load_hmm(cfg.source)
    raise ConfigError(f"unknown source {cfg.source!r}")


def _hyper_for(cfg: ExperimentConfig, k: int, alphabet: Alphabet):
    if cfg.fake_counts_path is not None:
        fake = _read_fake_counts(cfg.fake_counts_path, k, alphabet)
        return hyper_from_fake_counts(fake)
    return uniform_hyper(k, alphabet, cfg.alpha)


def _read_fake_counts(path: str, k: int, alphabet: Alphabet) -> CountTable:
    """CSV with columns word,symbol,count; unlisted entries default to 0."""
    import csv as _csv

    from .core import encode_word

    table = np.zeros((alphabet.size**k, alphabet.size))
    with open(path, "r", encoding="utf-8") as fh:
        for row in _csv.DictReader(fh):
            word = row["word"].strip()
            if len(word) != k:
                raise ConfigError(f"fake-count word {word!r} is not length {k}")
            w = encode_word([alphabet.index(c) for c in word], alphabet)
            table[w.code, alphabet.index(row["symbol"].strip())] = float(row["count"])
    return CountTable(k, alphabet, table)


def _counts_provider(cfg: ExperimentConfig):
    """Return (alphabet, counts_fn, truth) where counts_fn(N, k) -> CountTable.

    truth is the builtin LabeledHMM when exact reference values are
    available, else None.
    """
    if cfg.input_path is not None:
        seq = read_sequence(cfg.input_path, column=cfg.csv_column)

        def from_file(N, k):
            if N > len(seq):
                raise ConfigError(f"requested N={N} but input has {len(seq)} symbols")
            from .core import SymbolSequence

            return count_words(SymbolSequence(seq.alphabet, seq.data[:N]), k)

        return seq.alphabet, from_file, None

    hmm = _resolve_hmm(cfg)
    if cfg.mode == "sample":
        if cfg.seed is None:
            raise ConfigError("sample mode requires --seed")
        full = processes.sample_sequence(hmm, max(cfg.n_grid), cfg.seed)

        def from_sample(N, k):
            from .core import SymbolSequence

            return count_words(SymbolSequence(full.alphabet, full.data[:N]), k)

        return hmm.alphabet, from_sample, hmm

    return hmm.alphabet, (lambda N, k: processes.average_counts(hmm, N, k)), hmm


def _grid_map(fn, points, jobs: int):
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, points, chunksize=max(1, len(points) // (4 * jobs))))
    return [fn(p) for p in points]


# Module-level workers so ProcessPoolExecutor can pickle them.

def _evidence_point(args):
    cfg, N = args
    alphabet, counts_fn, _ = _counts_provider(cfg)
    out = {}
    for k in range(cfg.k_min, cfg.k_max + 1):
        counts = counts_fn(N, k)
        out[k] = inference.log_evidence(counts, _hyper_for(cfg, k, alphabet))
    return N, out


def _entropy_point(args):
    cfg, N = args
    alphabet, counts_fn, hmm = _counts_provider(cfg)
    rows = []
    for k in range(cfg.k_min, cfg.k_max + 1):
        counts = counts_fn(N, k)
        hyper = _hyper_for(cfg, k, alphabet)
        q = entropy.q_from(counts, hyper)
        kl_bits = None
        truth = None
        if hmm is not None:
            approx = processes.markov_approximation(hmm, k)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", entropy.SupportWarning)
                kl_bits = entropy.kl_of(q, approx.cond_probs)
            if hmm.is_unifilar():
                truth = processes.true_entropy_rate(hmm)
            elif hmm.name == "sns":
                truth = processes.SNS_ENTROPY_RATE
        rows.append(
            {
                "N": N,
                "k": k,
                "beta_k": q.beta,
                "energy_mean_bits": entropy.expected_energy(q),
                "energy_var": entropy.energy_variance(q),
                "hmu_Q_bits": entropy.hmu_of(q),
                "kl_bits_if_truth_known": kl_bits,
                "asymptotic_bits": entropy.asymptotic_energy(q),
                "truth_bits": truth,
            }
        )
    return rows


def cmd_infer(cfg: ExperimentConfig) -> None:
    alphabet, counts_fn, _ = _counts_provider(cfg)
    summary, density = [], []
    for N in cfg.n_grid:
        for k in range(cfg.k_min, cfg.k_max + 1):
            counts = counts_fn(N, k)
            hyper = _hyper_for(cfg, k, alphabet)
            for row in inference.summary_rows(counts, hyper, cfg.confidence):
                summary.append({"N": N, "k": k, **row})
            post = inference.posterior(counts, hyper)
            for w in range(post.params.shape[0]):
                word = word_string(WordIndex(k, w), alphabet)
                for s in range(alphabet.size):
                    m = inference.marginal(post, w, s)
                    xs, dens = inference.density_grid(m, cfg.density_points)
                    for x, d in zip(xs, dens):
                        density.append(
                            {"N": N, "k": k, "word": word,
                             "symbol": alphabet.symbols[s],
                             "x": float(x), "density": float(d)}
                        )
    _write_rows(cfg.out_dir / "infer_summary.csv",
                ["N", "k", "word", "symbol", "count", "alpha", "mean",
                 "variance", "ci_low", "ci_high"], summary, cfg.fmt)
    _write_rows(cfg.out_dir / "infer_density.csv",
                ["N", "k", "word", "symbol", "x", "density"], density, cfg.fmt)


def cmd_compare(cfg: ExperimentConfig) -> None:
    results = _grid_map(_evidence_point, [(cfg, N) for N in cfg.n_grid], cfg.jobs)
    alphabet, _, _ = _counts_provider(cfg)
    rows = []
    for N, evidences in sorted(results, key=lambda item: item[0]):
        uni = comparison.compare_uniform(evidences)
        pen = comparison.compare_penalized(evidences, alphabet.size)
        for k in sorted(evidences):
            rows.append(
                {"N": N, "k": k, "log_evidence_nats": evidences[k],
                 "prob_uniform": uni.probability(k),
                 "prob_penalized": pen.probability(k)}
            )
    _write_rows(cfg.out_dir / "compare.csv",
                ["N", "k", "log_evidence_nats", "prob_uniform", "prob_penalized"],
                rows, cfg.fmt)


def cmd_entropy(cfg: ExperimentConfig) -> None:
    chunks = _grid_map(_entropy_point, [(cfg, N) for N in cfg.n_grid], cfg.jobs)
    rows = sorted((r for chunk in chunks for r in chunk), key=lambda r: (r["N"], r["k"]))
    _write_rows(cfg.out_dir / "entropy.csv",
                ["N", "k", "beta_k", "energy_mean_bits", "energy_var",
                 "hmu_Q_bits", "kl_bits_if_truth_known", "asymptotic_bits",
                 "truth_bits"], rows, cfg.fmt)


def cmd_simulate(cfg: ExperimentConfig) -> None:
    if cfg.seed is None:
        raise ConfigError("simulate requires --seed")
    hmm = _resolve_hmm(cfg)
    seq = processes.sample_sequence(hmm, max(cfg.n_grid), cfg.seed)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    write_sequence(cfg.out_dir / "sequence.txt", seq)


def _log_grid(start: int, stop: int, points: int) -> tuple[int, ...]:
    return tuple(int(v) for v in np.unique(
        np.round(np.logspace(math.log10(start), math.log10(stop), points))
    ))


#: Parameter grids for the figure-reproduction bundles.  The order-comparison
#: grid for the first source is stated exactly (100..1000 step 5); the other
#: grids are logarithmic spans of the figures' visible axis ranges.
FIGURE_RECIPES = {
    2: ("infer", "golden_mean", {"n_grid": (100, 400, 1600, 6400), "k": (1, 1)}),
    3: ("compare", "golden_mean", {"n_grid": tuple(range(100, 1001, 5)), "k": (1, 4)}),
    4: ("entropy", "golden_mean", {"n_grid": _log_grid(100, 10_000, 49), "k": (1, 4)}),
    5: ("infer", "even", {"n_grid": (100, 400, 1600, 6400), "k": (1, 1)}),
    6: ("compare", "even", {"n_grid": _log_grid(100, 10_000, 61), "k": (1, 4)}),
    7: ("entropy", "even", {"n_grid": _log_grid(100, 200_000, 49), "k": (1, 6)}),
    8: ("infer", "sns", {"n_grid": (100, 400, 1600, 6400), "k": (1, 1)}),
    9: ("compare", "sns", {"n_grid": _log_grid(100, 100_000, 61), "k": (1, 4)}),
    10: ("entropy", "sns", {"n_grid": _log_grid(100, 100_000, 49), "k": (1, 6)}),
}


def cmd_reproduce(cfg: ExperimentConfig, figure: int) -> None:
    if figure not in FIGURE_RECIPES:
        raise ConfigError(f"unknown figure id {figure}; known: {sorted(FIGURE_RECIPES)}")
    command, source, recipe = FIGURE_RECIPES[figure]
    sub = ExperimentConfig(
        source=source, input_path=None, csv_column=None, mode="average",
        k_min=recipe["k"][0], k_max=recipe["k"][1], n_grid=recipe["n_grid"],
        alpha=cfg.alpha, fake_counts_path=None, prior=cfg.prior,
        confidence=cfg.confidence, seed=cfg.seed,
        out_dir=cfg.out_dir / f"fig{figure}", fmt=cfg.fmt, jobs=cfg.jobs,
        density_points=cfg.density_points,
    )
    {"infer": cmd_infer, "compare": cmd_compare, "entropy": cmd_entropy}[command](sub)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bayesmc")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("infer", "compare", "entropy", "simulate", "reproduce"):
        p = sub.add_parser(name)
        p.add_argument("--source", help="builtin source name or path to an hmm JSON file")
        p.add_argument("--input", help="sequence file (text, or CSV with --csv-column)")
        p.add_argument("--csv-column")
        p.add_argument("--mode", choices=("average", "sample"), default="average")
        p.add_argument("--k-min", type=int, default=1)
        p.add_argument("--k-max", type=int, default=1)
        p.add_argument("--n-start", type=int, default=1000)
        p.add_argument("--n-stop", type=int)
        p.add_argument("--n-step", type=int, default=5)
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--fake-counts")
        p.add_argument("--prior", choices=("uniform", "penalty"), default="uniform")
        p.add_argument("--confidence", type=float, default=0.95)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", default=os.environ.get(OUT_DIR_ENV, "."))
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        p.add_argument("--density-points", type=int, default=512)
        if name == "reproduce":
            p.add_argument("--figure", type=int, required=True)
    return parser


def _config_from(args) -> ExperimentConfig:
    if args.k_min < 1 or args.k_max < args.k_min:
        raise ConfigError(f"invalid order range [{args.k_min}, {args.k_max}]")
    stop = args.n_stop if args.n_stop is not None else args.n_start
    if args.n_step < 1 or stop < args.n_start:
        raise ConfigError("invalid N grid")
    n_grid = tuple(range(args.n_start, stop + 1, args.n_step))
    if not n_grid:
        raise ConfigError("empty N grid")
    if not 0.0 < args.confidence < 1.0:
        raise ConfigError("confidence must lie in (0, 1)")
    if args.alpha <= 0:
        raise ConfigError("alpha must be positive")
    return ExperimentConfig(
        source=args.source, input_path=args.input, csv_column=args.csv_column,
        mode=args.mode, k_min=args.k_min, k_max=args.k_max, n_grid=n_grid,
        alpha=args.alpha, fake_counts_path=args.fake_counts, prior=args.prior,
        confidence=args.confidence, seed=args.seed, out_dir=Path(args.out),
        fmt=args.format, jobs=max(1, args.jobs),
        density_points=args.density_points,
    )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from(args)
        if args.command == "infer":
            cmd_infer(cfg)
        elif args.command == "compare":
            cmd_compare(cfg)
        elif args.command == "entropy":
            cmd_entropy(cfg)
        elif args.command == "simulate":
            cmd_simulate(cfg)
        elif args.command == "reproduce":
            cmd_reproduce(cfg, args.figure)
    except (ConfigError, FileNotFoundError, KeyError, ValueError) as exc:
        if isinstance(exc, NumericDomainError):
            print(f"error code={EXIT_NUMERIC} message={exc}", file=sys.stderr)
            return EXIT_NUMERIC
        print(f"error code={EXIT_BAD_CONFIG} message={exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except (FloatingPointError, OverflowError, ZeroDivisionError) as exc:
        print(f"error code={EXIT_NUMERIC} message={exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
