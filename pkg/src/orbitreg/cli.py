"""Command-line entry point: ``orbitreg <group> <command> ...``.

Exit status is 0 for a yes verdict (or plain success), 1 for no, 2 for
unknown or a refused computation and 64 for usage and input errors.  Every
run emits one JSON manifest, to ``--manifest FILE`` or as a single line on
standard error.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import logging
import sys
from contextlib import redirect_stdout
from pathlib import Path

from . import acceptance, formats
from . import linalg as la
from .automata import count_words, dfa_combine, dfa_run
from .digraphs import WeightedDigraph, build_counting_digraph, build_lrs_digraph, walk_weight_sum
from .errors import FormatError, Refusal
from .filters import FILTERS, brute_realizability
from .forward import ChpInstance as ReductionInstance
from .forward import chp_to_pb, lrs_to_automata_pair, track_word, zurc_product, zurc_to_pepe, zurc_witness
from .hitting import ChpInstance, OdpInstance, PlpInstance, chamber_constraints, chp_odp_roundtrip, orbit_scan
from .lattice.cones import hilbert_basis, integral_caratheodory
from .lattice.ihp import bounded_php_oracle, ihp_to_php, wwhp_to_ihp
from .lattice.snf import lattice_hitting_set, smith_normal_form
from .lrs import lrs_eval, scale_to_integer
from .monoid import pb_to_wwhp
from .shadow import decide_downhit, decide_injective, decide_surjective, decide_uphit

log = logging.getLogger("orbitreg")

EXIT = {"yes": 0, "no": 1, "unknown": 2}
USAGE = 64
FILTER_NAMES = {"pb": "P", "inj": "I", "sur": "S", "per": "Per"}


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


class Run:
    """Collects output text, input digests and parameters for the manifest."""

    def __init__(self, argv):
        self.argv = list(argv)
        self.inputs: dict = {}
        self.params: dict = {}
        self.outputs: dict = {}
        self.verdict = None
        self.chunks: list[str] = []

    def read(self, path: str) -> str:
        data = Path(path).read_bytes()
        self.inputs[path] = hashlib.sha256(data).hexdigest()
        return data.decode()

    def emit(self, text: str) -> None:
        self.chunks.append(text if text.endswith("\n") else text + "\n")

    def save(self, path: str, data: bytes) -> None:
        Path(path).write_bytes(data)
        self.outputs[path] = hashlib.sha256(data).hexdigest()

    def plot(self, fn, path: str, *a, **kw) -> None:
        fn(*a, path=path, **kw)
        self.outputs[path] = hashlib.sha256(Path(path).read_bytes()).hexdigest()

    def manifest(self, status: int) -> str:
        body = {
            "command": self.argv,
            "inputs": self.inputs,
            "parameters": self.params,
            "outputs": self.outputs,
            "verdict": self.verdict,
            "exit": status,
        }
        return json.dumps(body, sort_keys=True, default=str)


def _verdict(run: Run, v: str) -> int:
    run.verdict = v
    return EXIT[v]


# --- lrs -------------------------------------------------------------------


def cmd_lrs_eval(args, run):
    s = formats.parse_lrs(run.read(args.file))
    if args.n < 1:
        raise ValueError("index must be at least 1")
    run.params["n"] = args.n
    run.emit(formats.fmt(lrs_eval(s, args.n)))
    if args.plot:
        from .report import plot_sequence

        run.plot(plot_sequence, args.plot, list(enumerate(s.values(args.n), 1)), title=args.file)
    return 0


def cmd_lrs_scale(args, run):
    y, big_n = scale_to_integer(formats.parse_lrs(run.read(args.file)))
    run.params["N"] = big_n
    run.emit(f"% scale {big_n}\n" + formats.format_lrs(y))
    return 0


def cmd_lrs_to_pair(args, run):
    pair = lrs_to_automata_pair(formats.parse_lrs(run.read(args.file)), args.m_bits, args.k_depth)
    run.params.update(ell=pair.ell, M=pair.m_bits, k=pair.k_depth)
    head = f"pair {pair.ell} {pair.m_bits} {pair.k_depth}\nvertices {pair.vertices}\n"
    if args.prefix:
        run.save(f"{args.prefix}-a.dfa", formats.format_dfa(pair.a).encode())
        run.save(f"{args.prefix}-b.dfa", formats.format_dfa(pair.b).encode())
        run.emit(head)
    else:
        run.emit(head + "% automaton A\n" + formats.format_dfa(pair.a) + "% automaton B\n" + formats.format_dfa(pair.b))
    return 0


# --- digraphs ----------------------------------------------------------------


def _weighted_text(g: WeightedDigraph) -> str:
    lines = [f"digraph {g.n}", f"mark s {g.s}", f"mark f {g.f}"]
    lines += [f"edge {a} {b} {w}" for a, b, w in g.edges]
    return "\n".join(lines) + "\n"


def cmd_digraph_build_lrs(args, run):
    run.emit(_weighted_text(build_lrs_digraph(formats.parse_lrs(run.read(args.file)))))
    return 0


def cmd_digraph_build_count(args, run):
    run.params.update(n=args.n, k=args.k)
    run.emit(_weighted_text(build_counting_digraph(args.n, args.k)))
    return 0


def cmd_digraph_walksum(args, run):
    g = formats.parse_digraph(run.read(args.file))
    if not isinstance(g, WeightedDigraph):
        raise FormatError("walk sums need a weighted digraph (no 'colors' line)")
    run.params["n"] = args.n
    run.emit(str(walk_weight_sum(g, args.n)))
    return 0


# --- automata ----------------------------------------------------------------


def cmd_dfa_count(args, run):
    run.params["n"] = args.n
    run.emit(str(count_words(formats.parse_dfa(run.read(args.file)), args.n)))
    return 0


def cmd_dfa_combine(args, run):
    a = formats.parse_dfa(run.read(args.a))
    b = formats.parse_dfa(run.read(args.b))
    run.params["mode"] = args.mode
    run.emit(formats.format_dfa(dfa_combine(a, b, args.mode)))
    return 0


def cmd_dfa_run(args, run):
    ok = dfa_run(formats.parse_dfa(run.read(args.file)), args.word)
    run.emit("accept" if ok else "reject")
    return _verdict(run, "yes" if ok else "no")


# --- reductions ----------------------------------------------------------------


def cmd_reduce_chp_to_pb(args, run):
    inst = formats.parse_orbit_instance(run.read(args.file))
    if not isinstance(inst, ChpInstance):
        raise FormatError("expected a chamber block with exactly one sign line")
    red = chp_to_pb(ReductionInstance(inst.phi, inst.x0, tuple(chamber_constraints(inst.chamber))))
    run.params.update(red.manifest)
    run.emit(formats.format_dfa(red.dfa))
    if args.witness is not None:
        run.params["witness_n"] = args.witness
        w = red.witness(args.witness, args.budget)
        run.emit(f"% witness {w if w is not None else 'none'}")
    return 0


def cmd_reduce_pb_to_wwhp(args, run):
    insts = pb_to_wwhp(formats.parse_dfa(run.read(args.file)))
    run.params["instances"] = len(insts)
    for i, inst in enumerate(insts):
        run.emit(f"% instance {i}\n" + formats.format_wwhp(inst))
    return 0


def cmd_reduce_wwhp_to_ihp(args, run):
    insts = wwhp_to_ihp(formats.parse_wwhp(run.read(args.file)))
    run.params["instances"] = len(insts)
    for i, inst in enumerate(insts):
        run.emit(f"% instance {i}\n" + formats.format_ihp(inst))
    return 0


def cmd_reduce_ihp_to_php(args, run):
    inst = formats.parse_ihp(run.read(args.file))
    run.params["bound"] = args.bound
    ans = ihp_to_php(inst, bounded_php_oracle(args.bound))
    run.emit(f"verdict {ans.verdict}" + (f"\nhit {ans.hit}" if ans.hit is not None else ""))
    for note in ans.notes:
        run.emit(f"% {note}")
    return _verdict(run, ans.verdict)


def _read_matrices(text: str) -> list:
    r = formats.Reader(text)
    mats = []
    while not r.done():
        mats.append(formats.read_matrix(r))
    if not mats:
        raise FormatError("expected at least one matrix")
    return mats


def cmd_reduce_zurc_to_pepe(args, run):
    mats = _read_matrices(run.read(args.file))
    if args.witness:
        seq = [int(x) for x in args.witness.split(",")]
        run.params.update(sequence=seq, budget=args.budget)
        prod = zurc_product(mats, seq)
        run.emit(formats.format_matrix(prod))
        w = zurc_witness(mats, seq, args.budget)
        if w is None:
            run.emit("witness none")
            return _verdict(run, "no")
        run.emit("witness " + " ".join(track_word(w)))
        return _verdict(run, "yes")
    run.emit(formats.format_dfa(zurc_to_pepe(mats)))
    return 0


# --- filters -------------------------------------------------------------------


def cmd_filter_check(args, run):
    ok = FILTERS[FILTER_NAMES[args.filter]](args.word)
    run.emit("yes" if ok else "no")
    return _verdict(run, "yes" if ok else "no")


def cmd_filter_brute(args, run):
    a = formats.parse_dfa(run.read(args.file))
    run.params.update(filter=args.filter, max_rank=args.max_rank, budget=args.budget, slack=args.slack)
    res = brute_realizability(a, FILTER_NAMES[args.filter], args.max_rank, args.budget, args.slack)
    if res.found:
        run.emit(f"yes\nrank {res.rank}\nblocks {res.count}\nwitness {res.word}")
        return _verdict(run, "yes")
    run.emit(f"unknown\nbound {res.bound}")
    return _verdict(run, "unknown")


# --- lattice -------------------------------------------------------------------


def cmd_lattice_snf(args, run):
    u, d, v = smith_normal_form(formats.parse_matrix(run.read(args.file)))
    run.emit("% U\n" + formats.format_matrix(u) + "% D\n" + formats.format_matrix(d) + "% V\n" + formats.format_matrix(v))
    return 0


def cmd_lattice_hilbert(args, run):
    c = formats.parse_cone(run.read(args.file))
    pts = hilbert_basis(c.gens)
    run.emit(f"hilbert {len(pts)}\n" + "".join(f"point {formats.fmt_vec(p)}\n" for p in pts))
    return 0


def cmd_lattice_caratheodory(args, run):
    c = formats.parse_cone(run.read(args.file))
    run.params["budget"] = args.budget
    points, cones = integral_caratheodory(c.apex, c.gens, args.budget)
    out = [f"decomposition {len(points)} {len(cones)}"]
    out += [f"point {formats.fmt_vec(p)}" for p in points]
    out += [str(k).rstrip("\n") for k in cones]
    run.emit("\n".join(out))
    return 0


def cmd_lattice_hitset(args, run):
    inst = formats.parse_ihp(run.read(args.file))
    h = lattice_hitting_set(inst.phi, inst.x0, inst.apex, inst.gens)
    run.emit(str(h))
    return _verdict(run, "no" if h.empty else "yes")


# --- deciders ------------------------------------------------------------------


def cmd_decide_dfa(args, run):
    a = formats.parse_dfa(run.read(args.file))
    run.params["witness_rank"] = args.witness_rank
    fn = decide_injective if args.kind == "inj" else decide_surjective
    d = fn(a, witness_rank=args.witness_rank)
    run.emit(str(d))
    return _verdict(run, d.verdict)


def cmd_decide_wwhp(args, run):
    inst = formats.parse_wwhp(run.read(args.file))
    fn = decide_uphit if args.kind == "up" else decide_downhit
    ok, hit, trace = fn(inst)
    lines = [f"verdict {'yes' if ok else 'no'}"]
    if hit is not None and args.kind == "up":
        lines += [f"rank {hit[0]}", "corner " + " ".join(map(str, hit[1]))]
    elif hit is not None:
        lines += ["box " + " ".join("inf" if x is None else str(x) for x in hit[0]), "weight " + " ".join(map(str, hit[1]))]
    lines += [f"trace {t}" for t in trace]
    run.emit("\n".join(lines))
    return _verdict(run, "yes" if ok else "no")


# --- orbit hitting ---------------------------------------------------------------


def cmd_hit_scan(args, run):
    inst = formats.parse_orbit_instance(run.read(args.file))
    run.params["bound"] = args.bound
    res = orbit_scan(inst, args.bound)
    # for description and localization instances the scan looks for an escape
    escape = isinstance(inst, (OdpInstance, PlpInstance))
    run.emit(str(res))
    if args.plot:
        from .report import plot_sequence

        h = _first_function(inst)
        xs = la.orbit(inst.phi, inst.x0, args.bound + 1)
        hits = [res.hit] if res.found else []
        run.plot(plot_sequence, args.plot, [(n, h(x)) for n, x in enumerate(xs)], title=args.file, hits=hits)
    if not res.found:
        return _verdict(run, "unknown")
    return _verdict(run, "no" if escape else "yes")


def _first_function(inst):
    if isinstance(inst, ChpInstance):
        return inst.chamber.funcs[0]
    if isinstance(inst, OdpInstance):
        return inst.funcs[0]
    if isinstance(inst, PlpInstance):
        return (inst.ineqs + inst.eqs)[0]
    return inst.families[0][0]


def cmd_hit_roundtrip(args, run):
    inst = formats.parse_orbit_instance(run.read(args.file))
    out = chp_odp_roundtrip(inst)
    for i, piece in enumerate(out if isinstance(out, list) else [out]):
        run.emit(f"% instance {i}\n" + formats.format_orbit_instance(piece))
    return 0


# --- verify ------------------------------------------------------------------------


def _suite(name: str) -> list[int]:
    if name in ("all", "acceptance"):
        return sorted(acceptance.CHECKS)
    try:
        nums = [int(x) for x in name.split(",")]
    except ValueError:
        raise ValueError(f"unknown suite {name!r}; use all or criterion numbers like 3,5") from None
    if any(k not in acceptance.CHECKS for k in nums):
        raise ValueError(f"criteria are numbered 1..{len(acceptance.CHECKS)}")
    return nums


def cmd_verify(args, run):
    nums = _suite(args.suite)
    run.params.update(seed=args.seed, suite=nums)
    results = acceptance.run_all(args.seed, nums)
    for r in results:
        run.emit(f"{'PASS' if r.passed else 'FAIL'} {r.number} {r.name}: {r.detail}")
        log.info("criterion %d took %.2fs", r.number, r.seconds)
    if args.plot:
        from .report import plot_results

        run.plot(plot_results, args.plot, [(f"{r.number} {r.name}", r.passed) for r in results])
    return _verdict(run, "yes" if all(r.passed for r in results) else "no")


# --- replay ------------------------------------------------------------------------


def cmd_replay(args, run):
    body = json.loads(run.read(args.recorded))
    argv = list(body["command"])
    out = io.StringIO()
    with redirect_stdout(out):
        status = main(argv + ["--manifest", str(Path(args.recorded).with_suffix(".replay.json"))])
    replayed = json.loads(Path(args.recorded).with_suffix(".replay.json").read_text())
    same = replayed["outputs"] == body["outputs"] and status == body["exit"]
    run.emit(f"replay {'identical' if same else 'differs'}")
    return _verdict(run, "yes" if same else "no")


# --- parser --------------------------------------------------------------------------


def _common(p):
    p.add_argument("--format", choices=("text", "jsonl"), default="text", help="output variant")
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED, help="seed for randomized suites")
    p.add_argument("--threads", type=int, default=1, help="worker threads (work runs in one thread)")
    p.add_argument("-o", "--output", help="write the main output here instead of stdout")
    p.add_argument("--manifest", help="write the run manifest here instead of stderr")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> Parser:
    top = Parser(prog="orbitreg", description="Reductions between orbit problems and regular realizability.")
    groups = top.add_subparsers(dest="group", required=True, parser_class=Parser)

    def leaf(sub, name, fn, help_):
        p = _common(sub.add_parser(name, help=help_))
        p.set_defaults(fn=fn)
        return p

    g = groups.add_parser("lrs", help="linear recurrence sequences").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "eval", cmd_lrs_eval, "element x_n")
    p.add_argument("file")
    p.add_argument("n", type=int)
    p.add_argument("--plot", help="PNG of x_1 .. x_n")
    leaf(g, "scale", cmd_lrs_scale, "integer sequence N^(n+1) x_n").add_argument("file")
    p = leaf(g, "to-pair", cmd_lrs_to_pair, "automata A, B with x_n = counts difference")
    p.add_argument("file")
    p.add_argument("--m-bits", type=int)
    p.add_argument("--k-depth", type=int)
    p.add_argument("--prefix", help="write PREFIX-a.dfa and PREFIX-b.dfa")

    g = groups.add_parser("digraph", help="weighted digraphs").add_subparsers(dest="cmd", required=True)
    leaf(g, "build-lrs", cmd_digraph_build_lrs, "digraph whose walk sums are the sequence").add_argument("file")
    p = leaf(g, "build-count", cmd_digraph_build_count, "digraph with n walks of length k")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p = leaf(g, "walksum", cmd_digraph_walksum, "weighted walk sum of length n")
    p.add_argument("file")
    p.add_argument("n", type=int)

    g = groups.add_parser("dfa", help="finite automata").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "count", cmd_dfa_count, "accepted words of length n")
    p.add_argument("file")
    p.add_argument("n", type=int)
    p = leaf(g, "combine", cmd_dfa_combine, "product automaton")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--mode", choices=("and", "or", "diff", "xor"), required=True)
    p = leaf(g, "run", cmd_dfa_run, "run on a word")
    p.add_argument("file")
    p.add_argument("word")

    g = groups.add_parser("reduce", help="reductions").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "chp-to-pb", cmd_reduce_chp_to_pb, "chamber hitting to permutation-filter realizability")
    p.add_argument("file")
    p.add_argument("--witness", type=int, metavar="N", help="also print the permutation word for orbit index N")
    p.add_argument("--budget", type=int, default=1 << 16)
    leaf(g, "pb-to-wwhp", cmd_reduce_pb_to_wwhp, "permutation filter to walk-weight hitting").add_argument("file")
    leaf(g, "wwhp-to-ihp", cmd_reduce_wwhp_to_ihp, "walk-weight hitting to integer cones").add_argument("file")
    p = leaf(g, "ihp-to-php", cmd_reduce_ihp_to_php, "integer cone hitting via rational cones")
    p.add_argument("file")
    p.add_argument("--bound", type=int, required=True, help="orbit steps per rational-cone query")
    p = leaf(g, "zurc-to-pepe", cmd_reduce_zurc_to_pepe, "zero upper-right corner to block automaton")
    p.add_argument("file")
    p.add_argument("--witness", metavar="SEQ", help="comma-separated factor indices; print the track word")
    p.add_argument("--budget", type=int, default=1 << 16)

    g = groups.add_parser("filter", help="block-word filters").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "check", cmd_filter_check, "membership of a word")
    p.add_argument("filter", choices=sorted(FILTER_NAMES))
    p.add_argument("word")
    p = leaf(g, "brute", cmd_filter_brute, "bounded search for an accepted filter word")
    p.add_argument("file")
    p.add_argument("--filter", choices=sorted(FILTER_NAMES), default="pb")
    p.add_argument("--max-rank", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--slack", type=int, default=2, help="extra blocks allowed for sur")

    g = groups.add_parser("lattice", help="lattices and cones").add_subparsers(dest="cmd", required=True)
    leaf(g, "snf", cmd_lattice_snf, "Smith normal form U D V").add_argument("file")
    leaf(g, "hilbert", cmd_lattice_hilbert, "Hilbert basis candidates of a simplicial cone").add_argument("file")
    p = leaf(g, "caratheodory", cmd_lattice_caratheodory, "points plus simplicial translates")
    p.add_argument("file")
    p.add_argument("--budget", type=int, required=True)
    leaf(g, "hitset", cmd_lattice_hitset, "orbit indices landing in a lattice coset").add_argument("file")

    g = groups.add_parser("decide", help="regular realizability deciders").add_subparsers(dest="cmd", required=True)
    for kind in ("inj", "sur"):
        p = leaf(g, kind, cmd_decide_dfa, f"reg({kind})")
        p.add_argument("file")
        p.add_argument("--witness-rank", type=int, default=2, help="rank bound for the certificate search (0 skips it)")
        p.set_defaults(kind=kind)
    for kind in ("up", "down"):
        p = leaf(g, kind, cmd_decide_wwhp, f"{kind}-shadow walk hitting")
        p.add_argument("file")
        p.set_defaults(kind=kind)

    g = groups.add_parser("hit", help="orbit hitting").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "scan", cmd_hit_scan, "bounded orbit scan")
    p.add_argument("file")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--plot", help="PNG of the first function along the orbit")
    leaf(g, "roundtrip", cmd_hit_roundtrip, "chamber hitting <-> orbit description").add_argument("file")

    p = _common(groups.add_parser("verify", help="acceptance suites"))
    p.add_argument("suite", help="'all' or comma-separated criterion numbers")
    p.add_argument("--plot", help="PNG status chart")
    p.set_defaults(fn=cmd_verify)

    p = _common(groups.add_parser("replay", help="re-run a manifest and compare outputs"))
    p.add_argument("recorded", metavar="MANIFEST")
    p.set_defaults(fn=cmd_replay)
    return top


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    # the manifest destination is not part of the replayable command
    clean, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--manifest":
            skip = True
        elif not a.startswith("--manifest="):
            clean.append(a)
    run = Run(clean)
    run.params.update(threads=args.threads, format=args.format)
    try:
        status = args.fn(args, run)
    except Refusal as e:
        print(f"refused: {e}", file=sys.stderr)
        run.verdict, status = "refused", 2
    except (FormatError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        status = USAGE
    text = "".join(run.chunks)
    if args.format == "jsonl":
        text = formats.to_jsonl(text)
    if args.output:
        run.save(args.output, text.encode())
    else:
        sys.stdout.write(text)
        run.outputs["-"] = hashlib.sha256(text.encode()).hexdigest()
    manifest = run.manifest(status)
    if args.manifest:
        Path(args.manifest).write_text(manifest + "\n")
    else:
        print(f"manifest {manifest}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
