"""Command line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 search budget exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
import time
from contextlib import redirect_stdout
from pathlib import Path

from . import __version__
from . import bounds as B
from .constructions import (check_property_p, crt_construct, crt_letter_at, crt_schedule,
                            euler_construct_improved, euler_construct_p, interval_model,
                            random_interval_word, ScheduleError)
from .explorer import count_avoiding, estimate_threshold, exact_f, DEFAULT_NODE_BUDGET
from .match import (DEFAULT_BUDGET, Pattern, Status, contains_pattern, find_zimin,
                    is_unavoidable, validate_witness)
from .stepup import (BFamilyEntry, SFamilyEntry, StepUpError, check_b_properties,
                     check_s_membership, step_up_b, step_up_s)
from .words import (SizeError, WordError, format_word_file, parse_word, parse_word_lines,
                    render_word, zimin)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
SEED_ENV = "ZIMIN_SEED"


class CliError(Exception):
    def __init__(self, msg: str, code: int = EXIT_USAGE):
        super().__init__(msg)
        self.code = code


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _read_lines(path) -> list:
    try:
        return Path(path).read_text().splitlines()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _words_from(args, run) -> list:
    if getattr(args, "word", None) is not None:
        fmt = "ints" if any(c.isdigit() for c in args.word) else "chars"
        try:
            return [parse_word(args.word, fmt)]
        except WordError as exc:
            raise CliError(str(exc)) from None
    run.inputs.append(args.file)
    try:
        return parse_word_lines(_read_lines(args.file))
    except WordError as exc:
        raise CliError(f"{args.file}: {exc}") from None


def _emit(text: str, out_path, run):
    if out_path:
        Path(out_path).write_text(text)
        run.outputs.append(out_path)
    else:
        sys.stdout.write(text)


class Run:
    """Collects what goes into the run manifest."""

    def __init__(self, argv, args):
        self.argv = list(argv)
        self.args = args
        self.inputs: list = []
        self.outputs: list = []
        self.t0 = time.perf_counter()

    def manifest(self, code: int) -> dict:
        params = {k: v for k, v in vars(self.args).items() if k not in ("func", "manifest", "replay")}
        return {
            "tool": "zimin",
            "version": __version__,
            "subcommand": self.args.command,
            "argv": self.argv,
            "params": params,
            "seed": params.get("seed"),
            "inputs": {p: _digest(p) for p in self.inputs if Path(p).exists()},
            "outputs": {p: _digest(p) for p in self.outputs if Path(p).exists()},
            "stdout_sha256": None,
            "exit_code": code,
            "wall_seconds": round(time.perf_counter() - self.t0, 6),
        }


# ---------------------------------------------------------------- subcommands

def cmd_zimin(args, run):
    try:
        w = zimin(args.n)
    except SizeError as exc:
        raise CliError(str(exc)) from None
    print(render_word(w, args.format))
    return EXIT_OK


def cmd_check(args, run):
    if args.pattern is not None:
        run.inputs.append(args.pattern)
        try:
            pats = [(render_word(w), Pattern.from_word(w))
                    for w in parse_word_lines(_read_lines(args.pattern))]
        except WordError as exc:
            raise CliError(f"{args.pattern}: {exc}") from None
    else:
        pats = None
    if args.word is None and args.file is None:
        if pats is None:
            raise CliError("check --zimin needs --word or --file")
        # classify the patterns themselves
        code = EXIT_OK
        for label, p in pats:
            res = is_unavoidable(p, args.budget)
            verdict = {Status.FOUND: "unavoidable", Status.ABSENT: "avoidable",
                       Status.UNDECIDED: "undecided"}[res.status]
            print(f"{label}\t{verdict}\tnodes={res.nodes}")
            if res.status is Status.UNDECIDED:
                code = EXIT_BUDGET
        return code
    words = _words_from(args, run)
    code = EXIT_OK
    for idx, w in enumerate(words, 1):
        if pats is None:
            wit = find_zimin(w, args.zimin)
            if wit is None:
                print(f"{idx}\tfree\tZ_{args.zimin}")
                continue
            if not validate_witness(w, wit):
                raise CliError("internal witness failed validation", EXIT_VERIFY)
            a, b = wit.interval
            print(f"{idx}\tcontains\tZ_{args.zimin}\t[{a},{b}]")
            for line in wit.describe().splitlines():
                print(f"  {line}")
            continue
        for label, p in pats:
            res = contains_pattern(w, p, args.budget)
            if res.status is Status.UNDECIDED:
                print(f"{idx}\tundecided\t{label}\tnodes={res.nodes}")
                code = EXIT_BUDGET
            elif res.status is Status.FOUND:
                # variables are numbered by first occurrence in the pattern text
                names = list(dict.fromkeys(label.split() if " " in label else label))
                spans = " ".join(f"{names[v]}=[{a},{b}]" for v, (a, b) in sorted(res.images.items()))
                print(f"{idx}\tcontains\t{label}\t{spans}")
            else:
                print(f"{idx}\tfree\t{label}")
    return code


def _verify_construction(method, w, q, extra=None) -> list:
    """Checker verdicts as ``(name, ok)`` pairs."""
    from .match import contains_zimin
    out = []
    if method == "euler":
        out.append(("property_p", bool(check_property_p(w, q))))
    if extra is not None:
        out.append(extra)
    out.append(("z3_free", not contains_zimin(w, 3)))
    return out


def cmd_construct(args, run):
    m = args.method
    comments = [f"method={m}"]
    extra = None
    if m != "crt" and args.q is None:
        raise CliError(f"--method {m} needs --q")
    if m in ("euler", "euler2"):
        build = euler_construct_p if m == "euler" else euler_construct_improved
        try:
            w = build(args.q)
        except ValueError as exc:
            raise CliError(str(exc)) from None
    elif m == "crt":
        if args.t is None or args.s is None:
            raise CliError("crt needs --t and --s")
        try:
            sched = crt_schedule(args.t, args.s)
        except ScheduleError as exc:
            raise CliError(str(exc)) from None
        if args.q is not None and args.q != sched.q:
            raise CliError(f"--q {args.q} does not match t*S = {sched.q}")
        w = crt_construct(sched)
        comments.append(f"t={sched.t} S={sched.S} periods={','.join(map(str, sched.periods))}")
        if args.verify:
            ok = all(crt_letter_at(sched, i) == s for i, s in enumerate(w.symbols))
            extra = ("letter_at", ok)
    else:
        try:
            model = interval_model(args.q, args.t, args.s, args.distinguished)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        k = args.intervals or 2 * model.t
        comments.append(f"t={model.t} S={model.S} intervals={k} seed={args.seed}")
        import numpy as np
        rng = np.random.default_rng(args.seed)
        w = None
        # sampled words are not always Z_3-free; redraw a bounded number of times
        for attempt in range(1, args.tries + 1):
            cand = random_interval_word(args.q, k, distinguished=args.distinguished,
                                        t=model.t, S=model.S, rng=rng)
            if not args.verify or all(ok for _, ok in _verify_construction(m, cand, args.q)):
                w = cand
                comments.append(f"draw={attempt}")
                break
        if w is None:
            print(f"no Z_3-free draw in {args.tries} tries", file=sys.stderr)
            return EXIT_VERIFY
    comments.insert(1, f"q={w.alphabet.size}")
    if args.verify:
        verdicts = _verify_construction(m, w, w.alphabet.size, extra)
        for name, ok in verdicts:
            print(f"{name}\t{'ok' if ok else 'FAIL'}", file=sys.stderr)
        if not all(ok for _, ok in verdicts):
            return EXIT_VERIFY
        comments.append("verified: " + " ".join(name for name, _ in verdicts))
    comments.append(f"length={len(w)}")
    _emit(format_word_file([w], args.format, comments=comments), args.out, run)
    return EXIT_OK


def _symbol(text: str) -> int:
    text = text.strip()
    if text.isdigit():
        return int(text)
    if len(text) == 1 and text.isalpha():
        return ord(text) - ord("a")
    raise CliError(f"cannot read symbol {text!r}")


def cmd_stepup(args, run):
    run.inputs.append(args.input)
    try:
        words = parse_word_lines(_read_lines(args.input))
    except WordError as exc:
        raise CliError(f"{args.input}: {exc}") from None
    if not args.keep_order:
        words = sorted(words, key=lambda w: w.symbols)
    n = args.level
    try:
        if args.family == "b":
            for i, w in enumerate(words, 1):
                rep = check_b_properties(w, n)
                if not rep:
                    print(f"input {i} not in B({n}): {rep}", file=sys.stderr)
                    return EXIT_VERIFY
            res = step_up_b([BFamilyEntry(w, n) for w in words])
            rep = check_b_properties(res.word, n + 1)
            print(f"output {rep}", file=sys.stderr)
            if not rep:
                return EXIT_VERIFY
            out, comments = res.word, [f"B({n + 1}) from {len(words)} words", f"length={len(res.word)}"]
        else:
            q = args.q or max(w.alphabet.size for w in words)
            d = _symbol(args.d) if args.d is not None else q - 1
            for i, w in enumerate(words, 1):
                chk = check_s_membership(w, n, q, d)
                if not chk:
                    print(f"input {i} not in S({n},{q}): {chk.reason}", file=sys.stderr)
                    return EXIT_VERIFY
            res = step_up_s([SFamilyEntry(w.with_alphabet(q), n, q, d) for w in words])
            chk = check_s_membership(res.word, res.n, res.q, res.d)
            print(f"output S({res.n},{res.q}) d={res.d}: {'ok' if chk else chk.reason}", file=sys.stderr)
            if not chk:
                return EXIT_VERIFY
            out = res.word
            comments = [f"S({res.n},{res.q}) distinguished={res.d} from {len(words)} words",
                        f"length={len(out)}"]
    except StepUpError as exc:
        raise CliError(str(exc)) from None
    _emit(format_word_file([out], args.format, comments=comments), args.out, run)
    return EXIT_OK


def _parse_range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return range(int(a), int(b) + 1)
        return range(int(text), int(text) + 1)
    except ValueError:
        raise CliError(f"bad range {text!r}; expected qmin..qmax") from None


def bound_rows(n: int, q: int) -> list:
    """``(name, value)`` rows for one ``(n, q)``; values are BoundValue, bool or None."""
    rows = [("f2_exact", B.f2_exact(q)), ("t2_count", B.t2_count(q)), ("f3_upper_rs", B.f3_upper_rs(q))]
    rows.append(("f3_upper_improved", B.f3_upper_improved(q) if q > 3 else None))
    rows.append(("f3_lower", B.f3_lower(q) if q >= 5 else None))
    rows.append(("f_upper", B.f_upper(n, q)))
    rows.append(("tower_bound", B.tower_bound(n, q) if n >= 3 and q >= 2 else None))
    rows.append(("base_inequality", B.verify_base_inequality(q)))
    rows.append(("threshold_length", B.threshold_length(n, q) if n >= 2 else None))
    return rows


def _fmt_value(v, digits: int) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, bool):
        return "true" if v else "false"
    return v.render(digits)


def cmd_bounds(args, run):
    qs = _parse_range(args.table) if args.table else [args.q]
    if any(q < 1 for q in qs) or args.n < 1:
        raise CliError("need n >= 1 and q >= 1")
    plot_rows = []
    for q in qs:
        rows = bound_rows(args.n, q)
        if args.tsv:
            for name, v in rows:
                print(f"{name}\t{args.n}\t{q}\t{_fmt_value(v, args.digits)}")
        else:
            print(f"n={args.n} q={q}")
            width = max(len(name) for name, _ in rows)
            for name, v in rows:
                print(f"  {name:<{width}}  {_fmt_value(v, args.digits)}")
        plot_rows.extend((name, q, v) for name, v in rows if isinstance(v, B.BoundValue))
    if args.plot:
        from .plotting import plot_bounds
        plot_bounds(plot_rows, args.plot)
        run.outputs.append(args.plot)
    return EXIT_OK


def cmd_search(args, run):
    res = exact_f(args.n, args.q, args.budget)
    status = "exact" if res.exact else "budget-exceeded"
    print("n\tq\tstatus\tvalue\tlongest\tnodes")
    value = res.value if res.exact else f">={len(res.longest_found) + 1}"
    print(f"{args.n}\t{args.q}\t{status}\t{value}\t{render_word(res.longest_found, args.format)}\t{res.nodes}")
    return EXIT_OK if res.exact else EXIT_BUDGET


def cmd_count(args, run):
    from .explorer import BudgetExceeded
    try:
        counts = count_avoiding(args.n, args.q, args.max_len, args.budget)
    except BudgetExceeded:
        print("budget exceeded", file=sys.stderr)
        return EXIT_BUDGET
    print("length\tcount")
    for L, c in enumerate(counts):
        print(f"{L}\t{c}")
    if args.plot:
        from .plotting import plot_counts
        plot_counts(counts, args.n, args.q, args.plot)
        run.outputs.append(args.plot)
    return EXIT_OK


def cmd_threshold(args, run):
    try:
        lengths = [int(x) for x in args.lengths.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"bad --lengths {args.lengths!r}") from None
    if any(L < 0 for L in lengths) or args.trials < 0:
        raise CliError("lengths and trials must be non-negative")
    est = estimate_threshold(args.n, args.q, lengths, args.trials, args.seed, args.jobs)
    print("length\ttrials\thits\tprob\tci_low\tci_high")
    for L, h, p, (lo, hi) in zip(est.lengths, est.hits, est.probs, est.ci):
        print(f"{L}\t{args.trials}\t{h}\t{p:.4f}\t{lo:.4f}\t{hi:.4f}")
    ref = B.threshold_length(args.n, args.q) if args.n >= 2 else None
    ref_val = 2.0 ** ref.log2() if ref is not None else None
    print(f"# median_crossing={est.median_crossing} reference={ref_val:.6g} "
          f"monotone_within_ci={est.monotone_within_ci()} seed={args.seed}" if ref_val is not None else
          f"# median_crossing={est.median_crossing} seed={args.seed}")
    if args.plot and est.probs:
        from .plotting import plot_threshold
        plot_threshold(est, args.plot, ref_val)
        run.outputs.append(args.plot)
    return EXIT_OK


def cmd_verify(args, run):
    run.inputs.append(args.file)
    try:
        words = parse_word_lines(_read_lines(args.file))
    except WordError as exc:
        raise CliError(f"{args.file}: {exc}") from None
    bad = 0
    for idx, w in enumerate(words, 1):
        if args.mode == "b-properties":
            rep = check_b_properties(w, args.n)
            ok, info = rep.ok, str(rep)
        elif args.mode == "s-membership":
            q = args.q or w.alphabet.size
            d = _symbol(args.d) if args.d is not None else q - 1
            chk = check_s_membership(w, args.n, q, d)
            ok, info = chk.ok, chk.reason or f"S({args.n},{q}) d={d}"
        else:
            wit = find_zimin(w, args.n)
            ok = wit is None
            info = f"Z_{args.n}-free" if ok else f"contains Z_{args.n} at [{wit.interval[0]},{wit.interval[1]}]"
        bad += not ok
        print(f"{idx}\t{'pass' if ok else 'FAIL'}\t{len(w)}\t{info}")
    print(f"# words={len(words)} pass={len(words) - bad} fail={bad}")
    return EXIT_OK if bad == 0 else EXIT_VERIFY


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zimin", description="Zimin-word avoidance toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--manifest", metavar="PATH", help="write the run manifest here instead of stderr")
    p.add_argument("--no-manifest", action="store_true", help="do not emit a run manifest")
    p.add_argument("--replay", metavar="MANIFEST", help="re-run the command recorded in a manifest")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        return sp

    def fmt(sp):
        sp.add_argument("--format", choices=("chars", "ints"), default=None,
                        help="word rendering (default: chars when q <= 26)")

    sp = add("zimin", cmd_zimin, "print the Zimin word Z_n")
    sp.add_argument("--n", type=int, required=True)
    fmt(sp)

    sp = add("check", cmd_check, "test words for Z_n or a pattern, or classify patterns")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--zimin", type=int, metavar="N")
    g.add_argument("--pattern", metavar="FILE", help="pattern file; without words, classifies unavoidability")
    g2 = sp.add_mutually_exclusive_group()
    g2.add_argument("--word")
    g2.add_argument("--file")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="pattern search node budget")

    sp = add("construct", cmd_construct, "build a long Z_3-free word")
    sp.add_argument("--method", choices=("euler", "euler2", "crt", "interval"), required=True)
    sp.add_argument("--q", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--s", type=int)
    sp.add_argument("--intervals", type=int, help="interval count for --method interval")
    sp.add_argument("--distinguished", action="store_true", help="reserve a distinguished letter (interval)")
    sp.add_argument("--tries", type=int, default=100, help="redraws for --method interval")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--verify", dest="verify", action="store_true", default=True)
    sp.add_argument("--no-verify", dest="verify", action="store_false", help="skip checks (benchmarking only)")
    sp.add_argument("--out")
    fmt(sp)

    sp = add("stepup", cmd_stepup, "step a family file up one level")
    sp.add_argument("--family", choices=("s", "b"), required=True)
    sp.add_argument("--in", dest="input", required=True, metavar="FILE")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--q", type=int)
    sp.add_argument("--d", metavar="SYM", help="distinguished symbol (default: q-1)")
    sp.add_argument("--keep-order", action="store_true", help="use file order instead of lexicographic")
    sp.add_argument("--out")
    fmt(sp)

    sp = add("bounds", cmd_bounds, "evaluate the bound formulas")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--table", metavar="QMIN..QMAX")
    sp.add_argument("--tsv", action="store_true", help="machine lines name<TAB>n<TAB>q<TAB>value")
    sp.add_argument("--digits", type=int, default=60, help="show exact values up to this many digits")
    sp.add_argument("--plot", metavar="PNG")

    sp = add("search", cmd_search, "exhaustive search for f(n,q)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    fmt(sp)

    sp = add("count", cmd_count, "count Z_n-free words by length")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--max-len", type=int, required=True)
    sp.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    sp.add_argument("--plot", metavar="PNG")

    sp = add("threshold", cmd_threshold, "Monte Carlo containment in random words")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--lengths", required=True, metavar="A,B,C")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--plot", metavar="PNG")

    sp = add("verify", cmd_verify, "per-line verdicts for a word file")
    sp.add_argument("--file", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", choices=("plain", "b-properties", "s-membership"), default="plain")
    sp.add_argument("--q", type=int)
    sp.add_argument("--d", metavar="SYM")
    return p


def _strip_manifest_opts(argv: list) -> list:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--manifest":
            skip = True
        elif a != "--no-manifest" and not a.startswith("--manifest="):
            out.append(a)
    return out


def dispatch(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.replay:
        try:
            recorded = json.loads(Path(args.replay).read_text())
            replay_argv = list(recorded["argv"])
        except (OSError, ValueError, KeyError) as exc:
            print(f"zimin: cannot replay {args.replay}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        outer = (["--manifest", args.manifest] if args.manifest else []) + \
            (["--no-manifest"] if args.no_manifest else [])
        return dispatch(outer + replay_argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    run = Run(_strip_manifest_opts(argv), args)
    buf = io.StringIO()
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = _default_seed()
        with redirect_stdout(buf):
            code = args.func(args, run)
    except CliError as exc:
        sys.stdout.write(buf.getvalue())
        print(f"zimin {args.command}: {exc}", file=sys.stderr)
        code = exc.code
    else:
        sys.stdout.write(buf.getvalue())
    sys.stdout.flush()
    if not args.no_manifest:
        man = run.manifest(code)
        man["stdout_sha256"] = hashlib.sha256(buf.getvalue().encode()).hexdigest()
        text = json.dumps(man, sort_keys=True, default=str)
        if args.manifest:
            Path(args.manifest).write_text(text + "\n")
        else:
            print(f"manifest {text}", file=sys.stderr)
    return code


def main(argv=None):
    sys.exit(dispatch(argv))
