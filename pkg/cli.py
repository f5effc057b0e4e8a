"""
StabLab command line.

Every subcommand reads its input from --config (JSON) or from flags, and
writes a deterministic artifact (text, JSON, CSV or SVG) to stdout or --out.
Status messages go to stderr.

Exit codes: 0 success, 1 contract violation, 2 parse error.
"""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

from dotenv import load_dotenv

import cache_utils
import elliptic_sl2z as sl2z
import flop_chambers as flops
import heart_stability as hs
import k3_mukai as k3
from console_utils import status
from errors import ConfigError, ContractError, StabLabError
from exact_utils import format_approx, format_rational, parse_int, parse_rational
from lattice_core import pair

load_dotenv()

FORMATS = ("text", "json", "csv", "svg")
MAX_SEED = 2 ** 64


@dataclass
class CommandResult:
    """What a subcommand produced; the dispatcher renders it in the requested format."""

    payload: Dict[str, Any]
    text: str
    csv_header: Optional[List[str]] = None
    csv_rows: List[List[str]] = field(default_factory=list)
    plot: Optional[Callable[[str], None]] = None


def load_config(path: Optional[str]) -> Dict[str, Any]:
    """
    Read a JSON config file.

    Raises:
        ConfigError: with line and column for malformed JSON
    """
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: {e.msg}", line=e.lineno, column=e.colno)
    except OSError as e:
        raise ConfigError(f"Cannot read {path}: {e.strerror}")
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return data


def parse_pairs(text: str) -> List[List[str]]:
    """ "0,1;-1,0" -> [["0", "1"], ["-1", "0"]]."""
    pairs = []
    for chunk in text.split(";"):
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 2 or not all(parts):
            raise ConfigError(f"Expected \"x,y\" pairs separated by ';', got {chunk!r}")
        pairs.append(parts)
    return pairs


def parse_range(text: str) -> List[Fraction]:
    """ "start:stop:steps" -> steps + 1 rationals."""
    if not isinstance(text, str):
        raise ConfigError(f"Range must be a \"start:stop:steps\" string, got {text!r}")
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"Range must be \"start:stop:steps\", got {text!r}")
    steps = parse_int(parts[2])
    if steps < 0:
        raise ConfigError(f"Range steps must be non-negative, got {steps}")
    return k3.rational_range(parts[0], parts[1], steps)


def _precision(args: argparse.Namespace) -> int:
    return args.precision if args.precision is not None else int(os.getenv("STABLAB_PRECISION", "12"))


def _workers(args: argparse.Namespace) -> int:
    return max(1, args.workers if args.workers is not None else int(os.getenv("STABLAB_WORKERS", "1")))


def _sigma(data: Dict[str, Any], args: argparse.Namespace, key: str = "sigma") -> hs.StabilityCondition:
    if getattr(args, "z", None):
        return hs.StabilityCondition.from_json({"z": parse_pairs(args.z)})
    if key in data:
        return hs.StabilityCondition.from_json(data[key])
    if "z" in data:
        return hs.StabilityCondition.from_json(data)
    raise ConfigError(f"Need a stability condition: --z or \"{key}\" in the config")


# --- heart-stability -------------------------------------------------------

def cmd_hn(args: argparse.Namespace) -> CommandResult:
    """
    HN report for an object.

    Expects JSON:
    {
        "sigma": {"n": 2, "z": [["0", "1"], ["-1", "0"]]},
        "object": [[1, 2]]          // list of intervals [a, b]
    }
    """
    data = load_config(args.config)
    sigma = _sigma(data, args)
    n = sigma.heart.n
    if args.object:
        obj = hs.IntervalObject(n, tuple((parse_int(a), parse_int(b)) for a, b in parse_pairs(args.object)))
    elif "object" in data:
        obj = hs.IntervalObject.from_json(n, data["object"])
    else:
        obj = sigma.heart.interval(1, n)
    precision = _precision(args)
    hn = hs.hn_filtration(sigma, obj)
    z = hs.central_charge(sigma, obj)
    semistable = hs.is_semistable(sigma, obj) if obj.is_interval() else None
    mass = hn.mass_approx()

    lines = [f"object {obj}", f"Z = {z.format()}"]
    if semistable is not None:
        lines.append(f"semistable: {'yes' if semistable else 'no'}")
    lines.append(f"HN factors ({len(hn.factors)}):")
    for i, f in enumerate(hn.factors, 1):
        lines.append(f"  {i}. {f.obj}  Z = {f.charge.format()}  phase {f.phase.format(precision)}  mass {f.mass}")
    lines.append(f"phi+ = {hn.phi_plus.format(precision)}")
    lines.append(f"phi- = {hn.phi_minus.format(precision)}")
    lines.append(f"mass = {hn.mass} = {format_approx(mass, precision)}")
    payload = {
        "sigma": sigma.to_json(),
        "object": obj.to_json(),
        "charge": z.to_json(),
        "semistable": semistable,
        "factors": hn.to_json(precision),
        "phi_plus": hn.phi_plus.format(precision),
        "phi_minus": hn.phi_minus.format(precision),
        "mass": str(hn.mass),
        "mass_approx": format_approx(mass, precision),
    }
    return CommandResult(payload, "\n".join(lines) + "\n")


def cmd_dist(args: argparse.Namespace) -> CommandResult:
    """
    Distance between two stability conditions.

    Expects JSON: {"sigma1": {...}, "sigma2": {...}}
    """
    data = load_config(args.config)
    if "sigma1" not in data or "sigma2" not in data:
        raise ConfigError("dist needs \"sigma1\" and \"sigma2\" in the config")
    s1 = hs.StabilityCondition.from_json(data["sigma1"])
    s2 = hs.StabilityCondition.from_json(data["sigma2"])
    report = hs.distance(s1, s2)
    precision = _precision(args)
    value = report.format(precision)
    witness = f"M[{report.witness[0]},{report.witness[1]}]" if report.witness else "none"
    text = f"d = {value}\nattained at {witness} ({report.component})\n"
    payload = {"distance": value, "exact_zero": report.exact_zero,
               "witness": list(report.witness) if report.witness else None, "component": report.component}
    return CommandResult(payload, text)


def cmd_axioms(args: argparse.Namespace) -> CommandResult:
    """Check the stability condition axioms. Expects JSON: {"sigma": {...}} or {"n": .., "z": [..]}."""
    sigma = _sigma(load_config(args.config), args)
    report = hs.check_axioms(sigma)
    lines = [f"n = {report.n}: {'all axioms hold' if report.ok else 'VIOLATIONS'}"]
    for axiom, count in sorted(report.checks.items()):
        lines.append(f"  ({axiom}) {count} checks")
    lines.extend(f"  {v}" for v in report.violations)
    lines.append(f"local finiteness: {report.local_finiteness}")
    return CommandResult(report.to_json(), "\n".join(lines) + "\n")


# --- k3-mukai --------------------------------------------------------------

def _k3_model(data: Dict[str, Any]) -> k3.K3Model:
    return k3.K3Model.from_json(data.get("model", data))


def cmd_k3_classify(args: argparse.Namespace) -> CommandResult:
    """
    Classify a period point.

    Expects JSON:
    {
        "model": {"rho": 1, "ns_gram": [[2]]},
        "period": {"re": ["1", "0", "-4"], "im": ["0", "2", "0"]},   // or {"B": [..], "omega": [..]}
        "box": 5                                                     // optional wall scan box
    }
    """
    data = load_config(args.config)
    model = _k3_model(data)
    if "period" not in data:
        raise ConfigError("k3 classify needs \"period\" in the config")
    point = k3.period_from_json(model, data["period"])
    box = args.box if args.box is not None else (parse_int(data["box"]) if "box" in data else None)
    bound = None
    if box is None:
        a, b, c = k3.plane_gram(model, point)
        if a > 0 and a * c - b * b > 0:
            bound = k3.wall_box(model, point)
            status(f"📐 Wall completeness bound: box {bound}")
    result = k3.classify_period(model, point, box=box, workers=_workers(args))
    lines = [f"class: {result.kind}",
             f"plane Gram: (re,re) = {format_rational(result.gram[0])}, (re,im) = {format_rational(result.gram[1])},"
             f" (im,im) = {format_rational(result.gram[2])}"]
    if result.wall_box is not None:
        source = "completeness bound" if box is None else "given"
        lines.append(f"wall scan box: {result.wall_box} ({source})")
    if result.component:
        lines.append(f"component: {result.component}")
    for w in result.walls:
        lines.append(f"  wall delta = {w}")
    if result.witness is not None:
        lines.append(f"witness: ({', '.join(format_rational(x) for x in result.witness)})")
    payload = {"model": model.to_json(), "period": point.to_json(), **result.to_json(),
               "completeness_bound": bound}

    def plot(path: str):
        from plot_utils import plot_charges
        n = model.lattice.rank
        charges = []
        for j in range(n):
            e = tuple(int(i == j) for i in range(n))
            charges.append((f"e{j}", complex(float(pair(model.lattice, point.re, e)),
                                             float(pair(model.lattice, point.im, e)))))
        for w in result.walls:
            charges.append((str(w), complex(0, 0)))
        plot_charges(charges, path, f"Z(v) = (period, v): {result.kind}")

    return CommandResult(payload, "\n".join(lines) + "\n", plot=plot)


def cmd_k3_delta(args: argparse.Namespace) -> CommandResult:
    """(-2)-classes in a box. Expects JSON: {"model": {...}, "box": 2}."""
    data = load_config(args.config)
    model = _k3_model(data)
    box = args.box if args.box is not None else parse_int(data.get("box", 1))
    deltas = k3.delta_set(model, box, workers=_workers(args))
    lines = [f"{len(deltas)} (-2)-classes with |coordinates| <= {box}:"]
    lines.extend(f"  {d}" for d in deltas)
    payload = {"model": model.to_json(), "box": box, "count": len(deltas), "delta": [d.to_json() for d in deltas]}
    return CommandResult(payload, "\n".join(lines) + "\n",
                         csv_header=["r"] + [f"D{i + 1}" for i in range(model.rho)] + ["s"],
                         csv_rows=[[str(x) for x in d.coords] for d in deltas])


def cmd_k3_grid(args: argparse.Namespace) -> CommandResult:
    """
    Classify exp((beta + i omega) h) on a grid (rho = 1).

    Expects JSON: {"model": {"rho": 1, "ns_gram": [[2]]}, "beta": "-1:1:8", "omega": "-2:2:8"}
    """
    data = load_config(args.config)
    model = _k3_model(data) if data else k3.K3Model(1, ((2,),))
    betas = parse_range(args.beta_range or data.get("beta", "-1:1:8"))
    omegas = parse_range(args.omega_range or data.get("omega", "-2:2:8"))
    rows = k3.period_grid(model, betas, omegas, workers=_workers(args))
    csv_rows = [[format_rational(r.beta), format_rational(r.omega), r.kind, str(r.walls)] for r in rows]
    counts: Dict[str, int] = {}
    for r in rows:
        counts[r.kind] = counts.get(r.kind, 0) + 1
    text = f"{len(rows)} grid points\n" + "".join(f"  {k}: {v}\n" for k, v in sorted(counts.items()))
    payload = {"model": model.to_json(), "rows": [dict(zip(["beta", "omega", "class", "walls"], r)) for r in csv_rows]}

    def plot(path: str):
        from plot_utils import plot_region_grid
        plot_region_grid([(float(r.beta), float(r.omega), r.kind) for r in rows], path,
                         "exp((beta + i omega) h)")

    return CommandResult(payload, text, csv_header=["beta", "omega", "class", "walls"], csv_rows=csv_rows, plot=plot)


# --- flop-chambers ---------------------------------------------------------

def _ade(args: argparse.Namespace, data: Dict[str, Any]) -> flops.ADEConfig:
    if getattr(args, "type", None):
        return flops.ade_config(args.type, workers=_workers(args))
    if "type" in data or "cartan" in data:
        return flops.config_from_json(data, workers=_workers(args))
    return flops.ade_config("A1")


def cmd_roots(args: argparse.Namespace) -> CommandResult:
    """Root set. Expects --type A2 or JSON {"type": "A2"} / {"cartan": [[...]]}."""
    config = _ade(args, load_config(args.config))
    lines = [f"{config.name}: {len(config.roots)} roots (expected {flops.expected_root_count(config.name)})"]
    lines.extend(f"  {list(r)}" for r in config.roots)
    return CommandResult(config.to_json(), "\n".join(lines) + "\n",
                         csv_header=[f"c{i + 1}" for i in range(config.rank)],
                         csv_rows=[[str(x) for x in r] for r in config.roots])


def cmd_complement_grid(args: argparse.Namespace) -> CommandResult:
    """Conifold chambers on a (beta, omega) grid; CSV columns beta,omega,in_complement,region,twist."""
    data = load_config(args.config)
    betas = parse_range(args.beta_range or data.get("beta", "-2:2:40"))
    omegas = parse_range(args.omega_range or data.get("omega", "-1:1:20"))
    rows = flops.complement_grid(betas, omegas)
    csv_rows = flops.complement_csv_rows(rows)
    excluded = sum(1 for r in rows if not r.in_complement)
    text = f"{len(rows)} grid points, {excluded} outside the complement\n"
    payload = {"version": flops.COMPLEMENT_GRID_VERSION,
               "rows": [dict(zip(flops.COMPLEMENT_GRID_HEADER, r)) for r in csv_rows]}

    def plot(path: str):
        from plot_utils import plot_region_grid
        plot_region_grid([(float(r.beta), float(r.omega), r.chamber.region) for r in rows], path,
                         "Conifold slice Z(O_y) = -1")

    return CommandResult(payload, text, csv_header=list(flops.COMPLEMENT_GRID_HEADER), csv_rows=csv_rows, plot=plot)


def cmd_chamber(args: argparse.Namespace) -> CommandResult:
    """
    Chamber of a slice point.

    Expects --beta 1/2 --omega 0 (conifold) or JSON
    {"type": "A2", "point": {"beta": ["1/2", "1/3"], "omega": ["1", "0"]}}
    """
    data = load_config(args.config)
    if args.beta is not None or args.omega is not None:
        if args.beta is None or args.omega is None:
            raise ConfigError("chamber needs both --beta and --omega")
        point = flops.SlicePoint(tuple(parse_rational(x) for x in args.beta.split(",")),
                                 tuple(parse_rational(x) for x in args.omega.split(",")))
    elif "point" in data:
        point = flops.SlicePoint.from_json(data["point"])
    else:
        raise ConfigError("chamber needs --beta/--omega or \"point\" in the config")
    config = _ade(args, data) if point.rank > 1 or args.type or "type" in data or "cartan" in data else None

    if config is None or config.rank == 1:
        chamber = flops.classify_conifold(point)
        sky = flops.skyscraper_status(point)
        z_point = flops.conifold_charge(point, flops.POINT_CLASS)
        z_curve = flops.conifold_charge(point, flops.curve_sheaf(0))
        lines = [chamber.label, f"twist: {chamber.twist[0]}", f"Z(O_y) = {z_point.format()}",
                 f"Z(O_C) = {z_curve.format()}", f"O_y: {sky.status}"]
        if sky.factors:
            lines.append(f"  factor classes: {', '.join(str(f) for f in sky.factors)}")
        witness = flops.coh_heart_witness(point)
        if witness is not None:
            lines.append(f"Coh(Y) is not the heart: Z(O_C({witness})) lies on the positive real axis")
        payload = {"point": point.to_json(), **chamber.to_json(), "skyscraper": sky.to_json(),
                   "coh_heart_witness": witness}
    else:
        chamber = flops.classify_chamber(config, point)
        lines = [chamber.label, f"type: {config.name}", f"twist: {list(chamber.twist)}"]
        payload = {"type": config.name, "point": point.to_json(), **chamber.to_json()}
    if chamber.witness is not None:
        lines.append(f"violating root: {list(chamber.witness)}")
    if chamber.note:
        lines.append(f"note: {chamber.note}")
    return CommandResult(payload, "\n".join(lines) + "\n")


# --- elliptic-sl2z ---------------------------------------------------------

def cmd_sl2z_eval(args: argparse.Namespace) -> CommandResult:
    """Matrix of a word and its action on a charge vector (--vector "r,d")."""
    word = sl2z.parse_word(args.word)
    m = sl2z.matrix_of(word)
    lines = [f"word: {sl2z.format_word(word) or '(empty)'}", f"matrix: {sl2z.format_matrix(m)}",
             f"kernel witness: {'yes' if sl2z.kernel_witness(word) else 'no'}"]
    payload: Dict[str, Any] = {"word": sl2z.format_word(word), "matrix": [list(row) for row in m],
                               "kernel_witness": sl2z.kernel_witness(word)}
    if args.vector:
        parts = args.vector.split(",")
        if len(parts) != 2:
            raise ConfigError(f"Charge vector must be \"r,d\", got {args.vector!r}")
        v = sl2z.ChargeVector(parse_int(parts[0]), parse_int(parts[1]))
        image = sl2z.act(word, v)
        lines.append(f"({v.r}, {v.d}) -> ({image.r}, {image.d})")
        payload["vector"] = list(v)
        payload["image"] = list(image)
    return CommandResult(payload, "\n".join(lines) + "\n")


def cmd_sl2z_decompose(args: argparse.Namespace) -> CommandResult:
    """Word for an SL(2, Z) matrix given as --matrix "a,b,c,d"."""
    m = sl2z.parse_matrix(args.matrix)
    word = sl2z.decompose(m)
    text = (f"matrix: {sl2z.format_matrix(m)}\nword: {sl2z.format_word(word) or '(empty)'}\n"
            f"length: {len(word)} (bound {sl2z.decompose_length_bound(m)})\n")
    payload = {"matrix": [list(row) for row in m], "word": sl2z.format_word(word), "length": len(word)}
    return CommandResult(payload, text)


# --- selftest and cache ----------------------------------------------------

def cmd_selftest(args: argparse.Namespace) -> CommandResult:
    from selftest import run_selftest
    report = run_selftest(args.seed, _workers(args))
    result = CommandResult(report.to_json(), report.format_text())
    if not report.ok:
        failed = next(r for r in report.results if not r.passed)
        raise SelfTestFailure(result, failed.name)
    return result


class SelfTestFailure(ContractError):
    def __init__(self, result: CommandResult, check: str):
        super().__init__(f"selftest check {check} failed", "selftest")
        self.result = result


def cmd_cache(args: argparse.Namespace) -> CommandResult:
    if args.action == "clear":
        cache_utils.clear_cache()
        return CommandResult({"cleared": True}, "cache cleared\n")
    stats = cache_utils.get_cache_stats()
    return CommandResult(stats, "".join(f"{k}: {v}\n" for k, v in stats.items()))


# --- dispatch --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON input file")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized runs")
    common.add_argument("--out", help="write the artifact here instead of stdout")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--workers", type=int, help="worker threads (STABLAB_WORKERS)")
    common.add_argument("--precision", type=int, help="digits for approximations (STABLAB_PRECISION)")

    parser = argparse.ArgumentParser(prog="stablab", description="Exact computations with stability conditions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hn", parents=[common], help="Harder-Narasimhan report")
    p.add_argument("--z", help="simple charges \"x1,y1;x2,y2;...\"")
    p.add_argument("--object", help="intervals \"a1,b1;a2,b2;...\"")
    p.set_defaults(handler=cmd_hn)

    p = sub.add_parser("dist", parents=[common], help="distance between two stability conditions")
    p.set_defaults(handler=cmd_dist)

    p = sub.add_parser("axioms", parents=[common], help="check the stability condition axioms")
    p.add_argument("--z", help="simple charges \"x1,y1;x2,y2;...\"")
    p.set_defaults(handler=cmd_axioms)

    p = sub.add_parser("k3", help="K3 Mukai lattice")
    k3_sub = p.add_subparsers(dest="k3_command", required=True)
    q = k3_sub.add_parser("classify", parents=[common], help="classify a period point")
    q.add_argument("--box", type=int, help="wall scan box (default: completeness bound)")
    q.set_defaults(handler=cmd_k3_classify)
    q = k3_sub.add_parser("delta", parents=[common], help="enumerate (-2)-classes")
    q.add_argument("--box", type=int)
    q.set_defaults(handler=cmd_k3_delta)
    q = k3_sub.add_parser("grid", parents=[common], help="classify exp((beta + i omega) h) on a grid")
    q.add_argument("--beta-range", help="start:stop:steps")
    q.add_argument("--omega-range", help="start:stop:steps")
    q.set_defaults(handler=cmd_k3_grid)

    p = sub.add_parser("roots", parents=[common], help="ADE root set")
    p.add_argument("--type", help="A1, A2, ..., D4, ..., E6, E7, E8")
    p.set_defaults(handler=cmd_roots)

    p = sub.add_parser("complement-grid", parents=[common], help="conifold chambers on a grid")
    p.add_argument("--beta-range", help="start:stop:steps")
    p.add_argument("--omega-range", help="start:stop:steps")
    p.set_defaults(handler=cmd_complement_grid)

    p = sub.add_parser("chamber", parents=[common], help="chamber of a slice point")
    p.add_argument("--beta", help="rational, or comma-separated for higher rank")
    p.add_argument("--omega", help="rational, or comma-separated for higher rank")
    p.add_argument("--type", help="root system for higher rank (default A1)")
    p.set_defaults(handler=cmd_chamber)

    p = sub.add_parser("sl2z", help="SL(2, Z) words")
    sl_sub = p.add_subparsers(dest="sl2z_command", required=True)
    q = sl_sub.add_parser("eval", parents=[common], help="evaluate a word")
    q.add_argument("--word", required=True, help="e.g. \"F,T,T,F\" or \"T^-2,Shift\"")
    q.add_argument("--vector", help="charge vector \"r,d\"")
    q.set_defaults(handler=cmd_sl2z_eval)
    q = sl_sub.add_parser("decompose", parents=[common], help="word for a matrix")
    q.add_argument("--matrix", required=True, help="\"a,b,c,d\" row-major, det 1")
    q.set_defaults(handler=cmd_sl2z_decompose)

    p = sub.add_parser("selftest", parents=[common], help="seeded invariant suite")
    p.set_defaults(handler=cmd_selftest)

    p = sub.add_parser("cache", parents=[common], help="enumeration cache")
    p.add_argument("action", choices=["stats", "clear"])
    p.set_defaults(handler=cmd_cache)
    return parser


def render(result: CommandResult, fmt: str, out: Optional[str]) -> str:
    """
    The artifact for fmt; SVG is written straight to out.

    Raises:
        ConfigError: for a format the command does not produce
    """
    if fmt == "json":
        return json.dumps(result.payload, indent=2) + "\n"
    if fmt == "csv":
        if result.csv_header is None:
            raise ConfigError("This command has no CSV output")
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(result.csv_header)
        writer.writerows(result.csv_rows)
        return buffer.getvalue()
    if fmt == "svg":
        if result.plot is None:
            raise ConfigError("This command has no SVG output")
        if not out:
            raise ConfigError("--format svg needs --out")
        result.plot(out)
        return ""
    return result.text


def _emit(args: argparse.Namespace, result: CommandResult):
    artifact = render(result, args.format, args.out)
    if args.format == "svg":
        return
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            f.write(artifact)
        status(f"📝 Wrote {args.out}")
    else:
        sys.stdout.write(artifact)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not 0 <= args.seed < MAX_SEED:
        print(f"❌ Parse error: --seed must be in [0, 2^64), got {args.seed}", file=sys.stderr)
        return 2
    try:
        _emit(args, args.handler(args))
        return 0
    except SelfTestFailure as e:
        _emit(args, e.result)
        print(f"❌ {e}", file=sys.stderr)
        return 1
    except ConfigError as e:
        where = f" at line {e.line}, column {e.column}" if e.line is not None else ""
        print(f"❌ Parse error{where}: {e}", file=sys.stderr)
        return 2
    except StabLabError as e:
        print(f"❌ Contract violation [{e.invariant}]: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
