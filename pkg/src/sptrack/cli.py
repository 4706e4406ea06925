"""Command-line entry point.

Every subcommand that takes ``--out`` writes its files there together with
``manifest.json``; ``sptrack replay <manifest>`` reruns the recorded command.
Exit codes: 0 success, 2 usage or input error, 3 invariant violation.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, _backend
from .learn import derive_old, segment_corpus
from .pso import BENCHMARKS, SwarmConfig, optimize
from .sim import (Detector, crossing_scenario, detections, evaluate, extract_symbols, load_scenario,
                  read_tracks, render, write_pgm, write_tracks)
from .sim.scenario import Scenario, format_scenario
from .sp import (OldStore, PatternError, build_multiple_alignment, format_grid, format_pattern,
                 parse_patterns, recognize, run_length_compress, run_length_decompress, symbols)
from .sp.alignment import AlignmentError, check_alignment
from .sp.patterns import Pattern

EXIT_INPUT = 2
EXIT_INVARIANT = 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# helpers ----------------------------------------------------------------------

def _symbols_arg(text: str):
    """Symbols given inline, or read from a file when ``text`` names one."""
    p = Path(text)
    if p.is_file():
        return symbols(p.read_text(encoding="utf-8"))
    return symbols(text)


def _read_store(path) -> OldStore:
    return OldStore(parse_patterns(Path(path).read_text(encoding="utf-8")))


def _out_dir(args) -> Path | None:
    if getattr(args, "out", None) is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _jsonable(v):
    if dataclasses.is_dataclass(v):
        return {f.name: _jsonable(getattr(v, f.name)) for f in dataclasses.fields(v)}
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, Path):
        return str(v)
    return v


def write_manifest(out: Path, args, argv, config=None, outputs=()) -> Path:
    data = {
        "subcommand": args.command,
        "argv": list(argv),
        "seed": getattr(args, "seed", None),
        "config": _jsonable(config) if config is not None else None,
        "options": {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k != "func"},
        "outputs": sorted(str(o) for o in outputs),
        "backend": _backend.name,
        "version": __version__,
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _scenario(args) -> Scenario:
    if args.scenario is None:
        return crossing_scenario(args.seed)
    return load_scenario(args.scenario)


_CONFIG_KEYS = {
    "overlap_threshold": float, "recon_threshold": float, "lam": float, "d": int,
    "window": int, "update_every": int, "f_max": float,
}
_SWARM_KEYS = {"n_particles": int, "n_max": int, "c": float}


def read_tracker_config(path, seed: int):
    """``key = value`` lines; swarm keys are n_particles, n_max and c."""
    from .tracker import TrackerConfig
    cfg, swarm = {}, {}
    if path is not None:
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{lineno}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            kinds = _CONFIG_KEYS if k in _CONFIG_KEYS else _SWARM_KEYS if k in _SWARM_KEYS else None
            if kinds is None:
                raise InputError(f"{path}:{lineno}: unknown config key {k!r}")
            try:
                (cfg if kinds is _CONFIG_KEYS else swarm)[k] = kinds[k](v)
            except ValueError:
                raise InputError(f"{path}:{lineno}: bad value for {k}: {v!r}") from None
    base = TrackerConfig()
    if swarm:
        cfg["swarm"] = dataclasses.replace(base.swarm, **swarm)
    return dataclasses.replace(base, seed=seed, **cfg)


def detect_boxes(scenario: Scenario, frame, threshold: float = 0.999) -> dict:
    """Initial boxes found by template detectors and recognition.

    Each quadrant of an object's template becomes a detector with its own
    symbol.  A store holding one class ``obj<k>`` per object, whose single
    part lists the four quadrant symbols, recognizes the detected stream;
    every recognized class is boxed at its top-left quadrant hit.
    """
    dets, pats = [], []
    for k, o in zip(scenario.object_ids, scenario.objects):
        w, h = o.extent
        hw, hh = max(w // 2, 1), max(h // 2, 1)
        syms = []
        for q, (r0, c0) in enumerate(((0, 0), (0, w - hw), (h - hh, 0), (h - hh, w - hw))):
            sym = f"s{k}q{q}"
            dets.append(Detector(o.template[r0:r0 + hh, c0:c0 + hw], threshold, sym))
            syms.append(sym)
        pats.append(Pattern.old(f"obj{k}", f"obj{k} P{k} #P{k} #obj{k}".split(), 8))
        pats.append(Pattern.old(f"part{k}", [f"P{k}", *syms, f"#P{k}"], 1))
    stream = extract_symbols(frame, dets)
    if not stream:
        raise InputError("--detect found no objects in frame 0")
    found = {}
    # spurious hits beyond four per object are tolerated as unmatched symbols
    budget = max(0, len(stream) - 4 * len(scenario.objects))
    roots = [f"obj{k}" for k in scenario.object_ids]
    for r in recognize(stream, OldStore(pats), roots, error_budget=budget):
        k = int(r.class_id[3:])
        hits = detections(frame.pixels, dets[4 * (k - 1)])
        if hits:
            w, h = scenario.objects[k - 1].extent
            row, col, _ = hits[0]
            found[k] = (float(col), float(row), w, h)
    if not found:
        raise InputError("--detect recognized no objects in frame 0")
    return found


# subcommands ------------------------------------------------------------------

def cmd_align(args, argv) -> int:
    store = _read_store(args.old)
    new = _symbols_arg(args.new)
    found = build_multiple_alignment(new, store, beam_width=args.beam)
    text = io.StringIO()
    for rank, a in enumerate(found[:args.top], 1):
        check_alignment(a)
        s = a.score
        text.write(f"# alignment {rank}: saving={s.saving:.6f} raw={s.raw_cost:.6f} "
                   f"encoded={s.encoded_cost:.6f}\n")
        text.write(format_grid(a) + "\n")
    sys.stdout.write(text.getvalue())
    out = _out_dir(args)
    if out is not None:
        (out / "alignments.txt").write_text(text.getvalue(), encoding="utf-8")
        write_manifest(out, args, argv, outputs=["alignments.txt"])
    return 0


def cmd_rle(args, argv) -> int:
    unit = symbols(args.unit)
    if args.decode is not None:
        result = run_length_decompress(_symbols_arg(args.decode), unit)
    else:
        seq = _symbols_arg(args.input) if args.input is not None else list(unit) * args.count
        result = run_length_compress(seq, unit, lossless=not args.lossy)
    line = " ".join(result)
    print(line)
    out = _out_dir(args)
    if out is not None:
        (out / "rle.txt").write_text(line + "\n", encoding="utf-8")
        write_manifest(out, args, argv, outputs=["rle.txt"])
    return 0


def cmd_learn(args, argv) -> int:
    store = _read_store(args.old) if args.old else OldStore()
    event, updated = derive_old(_symbols_arg(args.new), store, beam_width=args.beam, prefix=args.prefix)
    print(event.log_line())
    out = _out_dir(args)
    if out is not None:
        text = "".join(format_pattern(p) + "\n" for p in updated)
        (out / "store.sp").write_text(text, encoding="utf-8")
        (out / "learn.log").write_text(event.log_line() + "\n", encoding="utf-8")
        write_manifest(out, args, argv, outputs=["store.sp", "learn.log"])
    return 0


def cmd_segment(args, argv) -> int:
    if args.corpus is not None:
        raw = Path(args.corpus).read_text(encoding="utf-8")
        corpus = raw.split() if args.tokens else [c for c in raw if not c.isspace()]
    else:
        from .fixtures import donsvic_corpus
        corpus, _ = donsvic_corpus(args.seed)
    res = segment_corpus(corpus, max_unit_len=args.max_unit_len, rounds=args.rounds)
    lex = sorted(res.lexicon.items(), key=lambda kv: (-len(kv[0]), -kv[1], kv[0]))
    lexicon = "".join(f"{''.join(u) if not args.tokens else ' '.join(u)}\t{n}\n" for u, n in lex)
    seg = " ".join(("".join(u) if not args.tokens else "_".join(u)) for u in res.units)
    print(f"total_cost={res.total_cost:.6f} units={len(res.units)} lexicon={len(res.lexicon)}")
    out = _out_dir(args)
    if out is not None:
        (out / "lexicon.txt").write_text(lexicon, encoding="utf-8")
        (out / "segmentation.txt").write_text(seg + "\n", encoding="utf-8")
        trace = "round,total_cost\n" + "".join(f"{i},{c!r}\n" for i, c in enumerate(res.trace))
        (out / "trace.csv").write_text(trace, encoding="utf-8")
        write_manifest(out, args, argv, outputs=["lexicon.txt", "segmentation.txt", "trace.csv"])
    else:
        sys.stdout.write(lexicon)
    return 0


def _truth_csv(truths) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["frame", "object_id", "cx", "cy", "w", "h", "visible_pixels", "occluder"])
    for g in truths:
        for k in sorted(g.centers):
            occ = g.occluder.get(k)
            wr.writerow([g.t, k, repr(float(g.centers[k][0])), repr(float(g.centers[k][1])),
                         g.extents[k][0], g.extents[k][1], int(g.visible[k].sum()),
                         "" if occ is None else occ])
    return buf.getvalue()


def cmd_simulate(args, argv) -> int:
    sc = _scenario(args)
    out = _out_dir(args)
    frames_dir = out / "frames"
    frames_dir.mkdir(exist_ok=True)
    truths = []
    for t in range(sc.frames):
        frame, gt = render(sc, t)
        write_pgm(frames_dir / f"frame_{t:04d}.pgm", frame.pixels)
        truths.append(gt)
    (out / "truth.csv").write_text(_truth_csv(truths), encoding="utf-8")
    outputs = ["truth.csv", "frames/"]
    if all(o.template_source for o in sc.objects):
        (out / "scenario.txt").write_text(format_scenario(sc), encoding="utf-8")
        outputs.append("scenario.txt")
    write_manifest(out, args, argv, outputs=outputs)
    print(f"rendered {sc.frames} frames of {sc.width}x{sc.height} to {frames_dir}")
    return 0


def cmd_track(args, argv) -> int:
    from .pipeline import run_scenario
    sc = _scenario(args)
    cfg = read_tracker_config(args.config, args.seed)
    boxes = None
    if args.detect:
        frame0, _ = render(sc, 0)
        boxes = detect_boxes(sc, frame0)
    run = run_scenario(sc, cfg, restarts=not args.no_restarts, boxes=boxes)
    if run.report is None:
        run.report = evaluate(run.rows, run.truth)
    out = _out_dir(args)
    write_tracks(run.rows, out / "tracks.csv")
    (out / "report.csv").write_text(run.report.to_text(), encoding="utf-8")
    (out / "occlusion.log").write_text("".join(l + "\n" for l in run.occlusion_log()), encoding="utf-8")
    restarts = "frame,object_id\n" + "".join(f"{t},{k}\n" for t, k in run.restarts)
    (out / "restarts.csv").write_text(restarts, encoding="utf-8")
    write_manifest(out, args, argv, config=cfg,
                   outputs=["tracks.csv", "report.csv", "occlusion.log", "restarts.csv"])
    sys.stdout.write(run.report.to_text())
    return 0


def cmd_evaluate(args, argv) -> int:
    sc = _scenario(args)
    truth = [render(sc, t)[1] for t in range(sc.frames)]
    report = evaluate(read_tracks(Path(args.tracks)), truth, args.threshold)
    sys.stdout.write(report.to_text())
    out = _out_dir(args)
    if out is not None:
        (out / "report.csv").write_text(report.to_text(), encoding="utf-8")
        write_manifest(out, args, argv, outputs=["report.csv"])
    return 0


def cmd_bench(args, argv) -> int:
    fn, bounds = BENCHMARKS[args.function]
    lo, hi = bounds[0][0], bounds[1][0]
    cfg = SwarmConfig(n_particles=args.n, n_max=args.iters, c=args.c,
                      bounds=((lo,) * args.dim, (hi,) * args.dim), seed=args.seed)
    best, fit, trace = optimize(fn, cfg, vectorized=True)
    if not np.all(np.diff(trace) >= 0):
        raise AssertionError("global best fitness decreased")
    text = "iteration,gbest_fitness\n" + "".join(f"{i},{float(v)!r}\n" for i, v in enumerate(trace))
    print(f"best={' '.join(repr(float(x)) for x in best)} fitness={fit!r}")
    out = _out_dir(args)
    if out is not None:
        (out / "trace.csv").write_text(text, encoding="utf-8")
        write_manifest(out, args, argv, config=cfg, outputs=["trace.csv"])
    else:
        sys.stdout.write(text)
    return 0


def cmd_replay(args, argv) -> int:
    path = Path(args.manifest)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        recorded = list(data["argv"])
    except (json.JSONDecodeError, KeyError, TypeError):
        raise InputError(f"{path}: not a run manifest") from None
    if recorded and recorded[0] == "replay":
        raise InputError("a replay manifest cannot be replayed")
    if args.out is not None:
        recorded = _with_out(recorded, args.out)
    return main(recorded)


def _with_out(argv, out):
    argv = list(argv)
    for i, a in enumerate(argv):
        if a == "--out" and i + 1 < len(argv):
            argv[i + 1] = str(out)
            return argv
        if a.startswith("--out="):
            argv[i] = f"--out={out}"
            return argv
    return argv + ["--out", str(out)]


# parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sptrack", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"sptrack {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("align", help="multiple alignment of New symbols against a pattern store")
    s.add_argument("--old", required=True, help=".sp pattern file")
    s.add_argument("--new", required=True, help="symbols, or a file holding them")
    s.add_argument("--beam", type=int, default=20)
    s.add_argument("--top", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_align)

    s = sub.add_parser("rle", help="run-length code repetitions of a unit")
    s.add_argument("--unit", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--input", help="symbols (or file) to encode")
    g.add_argument("--decode", help="code (or file) to expand")
    s.add_argument("--lossy", action="store_true", help="drop the repetition count")
    s.add_argument("--out")
    s.set_defaults(func=cmd_rle)

    s = sub.add_parser("learn", help="derive Old patterns from a New pattern")
    s.add_argument("--old", help=".sp pattern file (default: empty store)")
    s.add_argument("--new", required=True)
    s.add_argument("--beam", type=int, default=20)
    s.add_argument("--prefix", default="p")
    s.add_argument("--seed", type=int, default=0, help="recorded only; learning is deterministic")
    s.add_argument("--out")
    s.set_defaults(func=cmd_learn)

    s = sub.add_parser("segment", help="unsupervised segmentation of an unsegmented corpus")
    s.add_argument("--corpus", help="text file; default the seeded five-word corpus")
    s.add_argument("--tokens", action="store_true", help="corpus symbols are whitespace separated")
    s.add_argument("--max-unit-len", type=int, default=8)
    s.add_argument("--rounds", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_segment)

    for name, func, helptext in (("simulate", cmd_simulate, "render a scenario to PGM frames"),
                                 ("track", cmd_track, "track every object of a scenario"),
                                 ("evaluate", cmd_evaluate, "score a trajectory CSV")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--scenario", help="scenario file; default the two-object crossing")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", required=name != "evaluate")
        s.set_defaults(func=func)
        if name == "track":
            s.add_argument("--config", help="tracker key = value file")
            s.add_argument("--detect", action="store_true",
                           help="initialize from template detection and recognition")
            s.add_argument("--no-restarts", action="store_true")
        if name == "evaluate":
            s.add_argument("--tracks", required=True)
            s.add_argument("--threshold", type=float, default=0.65)

    s = sub.add_parser("bench", help="swarm optimizer on a benchmark function")
    s.add_argument("function", choices=sorted(BENCHMARKS))
    s.add_argument("--n", type=int, default=30)
    s.add_argument("--iters", type=int, default=100)
    s.add_argument("--dim", type=int, default=2)
    s.add_argument("--c", type=float, default=0.05)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("replay", help="rerun the command recorded in a manifest")
    s.add_argument("manifest")
    s.add_argument("--out", help="write the outputs here instead")
    s.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, argv)
    except (AlignmentError, AssertionError, FloatingPointError) as e:
        print(f"sptrack: invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InputError, PatternError, OSError, ValueError, KeyError, IndexError) as e:
        print(f"sptrack: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
