"""Command-line front end.

Exit codes: 0 ok, 1 validation failure, 2 budget exceeded, 3 parse error.
"""

from __future__ import annotations

import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import click

from . import acceptance
from . import bundles as bd
from . import classify as cl
from . import decalage as dc
from . import formats as fm
from . import fuzz as fz
from . import homology as hm
from . import sgroup as sg
from . import sset as ss
from .sset import BudgetExceeded, DEFAULT_BUDGET, TruncationError

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_PARSE = 0, 1, 2, 3


@dataclass
class Manifest:
    command: str
    inputs: dict = field(default_factory=dict)
    trunc: int | None = None
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    out: str | None = None
    format: str = "text"


class Failed(Exception):
    """Validation failed; carries the report lines."""


# ------------------------------------------------------------ inputs

_GROUP_RE = re.compile(r"^(const|nerve):(C(\d+)|S3|trivial)$")
_BASE_RE = re.compile(r"^(circle|point|simplex:(\d+))$")


def group_arg(arg: str, N: int) -> sg.SimpGroup:
    """A sgroup/1 file, or a builtin such as const:C2, const:S3, nerve:C3."""
    m = _GROUP_RE.match(arg)
    if m and not Path(arg).exists():
        kind, name, k = m.group(1), m.group(2), m.group(3)
        if kind == "nerve":
            if not k:
                raise click.BadParameter("only nerve:Ck groups are built in", param_hint="--group")
            return sg.nerve_cyclic_group(int(k), N)
        H = sg.cyclic(int(k)) if k else sg.symmetric(3) if name == "S3" else sg.trivial_group()
        return sg.constant_group(H, N)
    G = fm.load(arg, "sgroup")
    return sg.truncate_group(G, min(N, G.trunc)) if N is not None else G


def base_arg(arg: str, N: int) -> ss.TruncSSet:
    """A tsset/1 file, or circle, point, simplex:n."""
    m = _BASE_RE.match(arg)
    if m and not Path(arg).exists():
        if arg == "circle":
            return ss.circle(N)
        if arg == "point":
            return ss.point(N)
        return ss.standard_simplex(int(m.group(2)), N)
    X = fm.load(arg, "tsset")
    return X.truncate(min(N, X.trunc)) if N is not None else X


def _emit(manifest: Manifest, report: dict, lines: list, doc=None):
    if doc is not None and manifest.out:
        fm.write(doc, manifest.out)
    if manifest.format == "json":
        click.echo(fm.dumps({"manifest": asdict(manifest), "report": report}), nl=False)
    else:
        for line in lines:
            click.echo(line)


def _sizes(X) -> list:
    return [f"  degree {n}: {c}" for n, c in enumerate(X.counts)]


def _run(fn):
    """Map exceptions to exit codes."""
    try:
        code = fn()
    except fm.FormatVersionError as e:
        click.echo(f"unsupported format: {e}", err=True)
        sys.exit(EXIT_PARSE)
    except fm.ParseError as e:
        click.echo(f"parse error: {e}", err=True)
        sys.exit(EXIT_PARSE)
    except BudgetExceeded as e:
        click.echo(f"budget exceeded: {e}", err=True)
        sys.exit(EXIT_BUDGET)
    except Failed as e:
        click.echo(f"validation failed: {e}", err=True)
        sys.exit(EXIT_INVALID)
    except (TruncationError, bd.TorsorError, bd.InvalidTwistingError, cl.GerbeError,
            bd.ConstructionMismatch, hm.ChainError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_INVALID)
    sys.exit(code or EXIT_OK)


def common(f):
    f = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)(f)
    f = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the main result here.")(f)
    f = click.option("--seed", type=int, default=0, show_default=True, help="64-bit seed for PCG64.")(f)
    f = click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True)(f)
    f = click.option("--trunc", type=click.IntRange(min=0), default=None, help="Truncation level.")(f)
    return f


def _manifest(command, inputs, trunc, budget, seed, out, fmt):
    return Manifest(command, {k: v for k, v in inputs.items() if v is not None}, trunc, budget, seed, out, fmt)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Truncated simplicial sets, classifying objects, torsors and finite gerbes."""


# ------------------------------------------------------------ validate


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@common
def validate(path, trunc, budget, seed, out, fmt):
    """Validate any supported document."""
    man = _manifest("validate", {"path": path}, trunc, budget, seed, out, fmt)

    def go():
        obj = fm.load(path)
        if isinstance(obj, ss.TruncSSet):
            rep = ss.validate_sset(obj)
        elif isinstance(obj, sg.SimpGroup):
            rep = sg.validate_sgroup(obj, budget)
        elif isinstance(obj, bd.TwistFn):
            rep = bd.validate_twisting(obj.base, obj.group, obj)
        elif isinstance(obj, bd.Torsor):
            rep = bd.validate_torsor(obj, check_group=True)
            if obj.section is not None:
                rep.extend(bd.validate_pseudo_section(obj), "pseudo-section: ")
        elif isinstance(obj, dc.BisSet):
            rep = dc.validate_bisset(obj)
        elif isinstance(obj, cl.GerbeData):
            rep = cl.validate_gerbe(obj)
        else:
            raise fm.ParseError(f"{path}:1: nothing to validate in this document")
        lines = ["valid" if rep.ok else rep.summary(20)]
        viol = [{"violation": e["violation"], "degree": e["degree"], "witness": str(e["witness"])}
                for e in rep.entries]
        _emit(man, {"ok": rep.ok, "violations": viol}, lines)
        return EXIT_OK if rep.ok else EXIT_INVALID

    _run(go)


# ------------------------------------------------------------ build


BUILD_KINDS = ["wbar", "wg", "twist", "cech", "cosk", "dec0", "dec", "ddec", "total", "path"]


@main.command()
@click.argument("kind", type=click.Choice(BUILD_KINDS))
@click.option("--group", "group", default=None, help="sgroup/1 file or builtin (const:C2, nerve:C3, ...).")
@click.option("--base", "base", default=None, help="tsset/1 file or builtin (circle, point, simplex:n).")
@click.option("--torsor", "torsor", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--bisset", "bisset", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--degree", type=click.IntRange(min=0), default=0, help="Coskeleton degree.")
@click.option("--side", type=click.Choice(["first", "last"]), default="first", show_default=True)
@common
def build(kind, group, base, torsor, bisset, degree, side, trunc, budget, seed, out, fmt):
    """Build a construction and write it with --out."""
    N = 3 if trunc is None else trunc
    man = _manifest(f"build {kind}", {"group": group, "base": base, "torsor": torsor, "bisset": bisset},
                    N, budget, seed, out, fmt)

    def need(value, flag):
        if value is None:
            raise click.UsageError(f"build {kind} needs {flag}")
        return value

    def go():
        if kind == "wbar":
            obj = bd.wbar(group_arg(need(group, "--group"), N), N)
        elif kind == "wg":
            obj = bd.wg(group_arg(need(group, "--group"), N), N).torsor
        elif kind == "twist":
            M = base_arg(need(base, "--base"), N)
            G = group_arg(need(group, "--group"), max(N - 1, 0))
            ts = bd.twist_search(M, G, budget, rng=fz.rng_for(seed), limit=1)
            obj = ts[0]
        elif kind == "cech":
            T = fm.load(need(torsor, "--torsor"), "torsor")
            obj = cl.cech_nerve(T.proj, min(N, T.trunc)).sset
        elif kind == "cosk":
            obj = ss.coskeleton(base_arg(need(base, "--base"), N), degree, N, budget)
        elif kind == "dec0":
            A = dc.dec0(base_arg(need(base, "--base"), N + 1), side)
            obj = A.sset
        elif kind == "dec":
            obj = dc.dec_total(base_arg(need(base, "--base"), N + 1))
        elif kind == "ddec":
            obj = dc.diagonal_dec(base_arg(need(base, "--base"), 2 * N + 1))
        elif kind == "total":
            obj = dc.total_T(fm.load(need(bisset, "--bisset"), "bisset"), N, budget)
        else:
            obj = dc.path_object(base_arg(need(base, "--base"), N + 1), N, budget).sset
        doc = fm.to_doc(obj)
        X = obj.total if isinstance(obj, bd.Torsor) else obj.base if isinstance(obj, bd.TwistFn) else obj
        if isinstance(X, dc.BisSet):
            lines = [f"{kind}: {len(X.base_of)} cells"] + [f"  ({p},{q}): {X.count(p, q)}" for p, q in X.cells()]
            sizes = {f"{p},{q}": X.count(p, q) for p, q in X.cells()}
        else:
            lines = [f"{kind}: sizes"] + _sizes(X)
            sizes = X.counts
        _emit(man, {"sizes": sizes, "format": doc["format"]}, lines, doc)
        return EXIT_OK

    _run(go)


# ------------------------------------------------------------ classify / verify / h1


def _load_torsor(path):
    T = fm.load(path, "torsor")
    if T.section is None:
        raise Failed("torsor has no pseudo-section")
    return T


@main.command()
@click.option("--torsor", "torsor", required=True, type=click.Path(exists=True, dir_okay=False))
@common
def classify(torsor, trunc, budget, seed, out, fmt):
    """Classifying maps M → W̄G and P → WG of a torsor with pseudo-section."""
    man = _manifest("classify", {"torsor": torsor}, trunc, budget, seed, out, fmt)

    def go():
        T = _load_torsor(torsor)
        C = cl.classifying_map(T)
        rep = cl.check_bundle_map(T, C)
        report = {
            "base_map": [m.tolist() for m in C.base_map.level_maps],
            "total_map": [m.tolist() for m in C.total_map.level_maps],
            "bundle_map": rep.ok,
        }
        lines = ["classifying map M → W̄G (degree: images)"]
        lines += [f"  {n}: {m.tolist()}" for n, m in enumerate(C.base_map.level_maps)]
        lines.append("bundle map: " + ("ok" if rep.ok else rep.summary()))
        doc = {"format": "twist/1", **{k: v for k, v in fm.twist_doc(C.twisting).items() if k != "format"}}
        _emit(man, report, lines, doc)
        return EXIT_OK if rep.ok else EXIT_INVALID

    _run(go)


@main.command()
@click.option("--torsor", "torsor", required=True, type=click.Path(exists=True, dir_okay=False))
@common
def verify(torsor, trunc, budget, seed, out, fmt):
    """Check a torsor is the pullback of WG along its classifying map."""
    man = _manifest("verify", {"torsor": torsor}, trunc, budget, seed, out, fmt)

    def go():
        T = _load_torsor(torsor)
        rep = bd.validate_torsor(T)
        if not rep.ok:
            raise Failed(rep.summary())
        ok = cl.verify_classification(T, cl.classifying_map(T), budget)
        _emit(man, {"classified": ok}, [f"classified: {'yes' if ok else 'no'}"])
        return EXIT_OK if ok else EXIT_INVALID

    _run(go)


@main.command()
@click.option("--base", "base", required=True)
@click.option("--group", "group", required=True)
@common
def h1(base, group, trunc, budget, seed, out, fmt):
    """Isomorphism classes of G-torsors over a base."""
    N = 3 if trunc is None else trunc
    man = _manifest("h1", {"base": base, "group": group}, N, budget, seed, out, fmt)

    def go():
        M = base_arg(base, N)
        G = group_arg(group, M.trunc)
        H = bd.h1_enumerate(M.truncate(min(M.trunc, G.trunc)), G, budget)
        report = {"classes": H.count, "twisting_functions": len(H.twistings), "class_of": H.class_of}
        _emit(man, report, [f"classes: {H.count}", f"twisting functions: {len(H.twistings)}"])
        return EXIT_OK

    _run(go)


# ------------------------------------------------------------ gerbes


@main.group()
def gerbe():
    """Finite C_k bundle gerbes."""


@gerbe.command("extract")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@common
def gerbe_extract(path, trunc, budget, seed, out, fmt):
    """Twisting function of a gerbe on its 1-coskeleton hypercover."""
    N = 3 if trunc is None else trunc
    man = _manifest("gerbe extract", {"gerbe": path}, N, budget, seed, out, fmt)

    def go():
        g = fm.load(path, "gerbe")
        rep = cl.validate_gerbe(g)
        if not rep.ok:
            raise Failed(rep.summary())
        H = cl.cosk1_hypercover(g, N)
        t = cl.gerbe_to_twisting(g, H)
        rep = bd.validate_twisting(H.sset, t.group, t)
        lines = ["hypercover sizes"] + _sizes(H.sset) + ["twisting: " + ("valid" if rep.ok else rep.summary())]
        _emit(man, {"sizes": H.sset.counts, "valid": rep.ok}, lines, fm.twist_doc(t))
        return EXIT_OK if rep.ok else EXIT_INVALID

    _run(go)


@gerbe.command("build")
@click.argument("cover", type=click.Path(exists=True, dir_okay=False))
@click.argument("twist", type=click.Path(exists=True, dir_okay=False))
@common
def gerbe_build(cover, twist, trunc, budget, seed, out, fmt):
    """Quotient gerbe from a twisting function on the hypercover of COVER."""
    man = _manifest("gerbe build", {"cover": cover, "twist": twist}, trunc, budget, seed, out, fmt)

    def go():
        g = fm.load(cover, "gerbe")
        t = fm.load(twist, "twist")
        H = cl.cosk1_hypercover(g, t.base.trunc)
        if not H.sset.same_tables(t.base):
            raise Failed("twisting function is not defined on the hypercover of the cover")
        t = bd.TwistFn(H.sset, t.group, t.maps)
        L = cl.twisting_to_gerbe(H, t)
        rep = cl.validate_gerbe(L)
        _emit(man, {"valid": rep.ok, "Y1": int(L.n1)},
              [f"gerbe: {L.n1} elements of Y1, " + ("valid" if rep.ok else rep.summary())], fm.gerbe_doc(L))
        return EXIT_OK if rep.ok else EXIT_INVALID

    _run(go)


@gerbe.command("class")
@click.argument("first", type=click.Path(exists=True, dir_okay=False))
@click.argument("second", type=click.Path(exists=True, dir_okay=False))
@common
def gerbe_class(first, second, trunc, budget, seed, out, fmt):
    """Are two gerbes over the same cover isomorphic?"""
    man = _manifest("gerbe class", {"first": first, "second": second}, trunc, budget, seed, out, fmt)

    def go():
        g, h = fm.load(first, "gerbe"), fm.load(second, "gerbe")
        for x in (g, h):
            rep = cl.validate_gerbe(x)
            if not rep.ok:
                raise Failed(rep.summary())
        phi = cl.find_gerbe_isomorphism(g, h)
        same = phi is not None
        report = {"isomorphic": same, "map": None if phi is None else phi.tolist()}
        _emit(man, report, [f"same class: {'yes' if same else 'no'}"])
        return EXIT_OK

    _run(go)


# ------------------------------------------------------------ homology


@main.command()
@click.option("--base", "base", required=True, help="tsset/1 file or builtin.")
@click.option("--coeffs", type=click.IntRange(min=1), default=None, help="Cohomology with C_k coefficients.")
@click.option("--max-degree", type=click.IntRange(min=0), default=None)
@click.option("--allow-truncation-edge", is_flag=True, help="Report degrees near the truncation anyway.")
@common
def homology(base, coeffs, max_degree, allow_truncation_edge, trunc, budget, seed, out, fmt):
    """Integral homology (or C_k cohomology) per degree."""
    N = 5 if trunc is None else trunc
    man = _manifest("homology", {"base": base, "coeffs": coeffs}, N, budget, seed, out, fmt)

    def go():
        X = base_arg(base, N)
        top = X.trunc - 2 if max_degree is None else max_degree
        if allow_truncation_edge and max_degree is None:
            top = X.trunc - 1
        groups = {}
        for n in range(top + 1):
            if coeffs is None:
                groups[n] = hm.homology_groups(X, n, allow_truncation_edge)
            else:
                groups[n] = hm.cohomology_coeffs(X, coeffs, n, allow_truncation_edge)
        sym = "H" if coeffs is None else "H^"
        lines = [f"{sym}{'_' if coeffs is None else ''}{n} = {g}" for n, g in groups.items()]
        doc = fm.homology_doc(groups, coeffs)
        _emit(man, doc, lines, doc)
        return EXIT_OK

    _run(go)


# ------------------------------------------------------------ selftest / fuzz


@main.command()
@click.option("--only", type=click.IntRange(1, 10), multiple=True, help="Run only these criteria.")
@common
def selftest(only, trunc, budget, seed, out, fmt):
    """Run the acceptance suite."""
    man = _manifest("selftest", {}, trunc, budget, seed, out, fmt)

    def go():
        results = [acceptance.run(n, seed) for n in (sorted(only) or sorted(acceptance.CRITERIA))]
        ok = all(r.passed for r in results)
        # timings vary between runs, so only the text report carries them
        report = {"passed": ok, "criteria": [{"number": r.number, "title": r.title, "ok": r.ok,
                                              "detail": r.detail} for r in results]}
        _emit(man, report, [r.line() for r in results] + [f"overall: {'PASS' if ok else 'FAIL'}"])
        return EXIT_OK if ok else EXIT_INVALID

    _run(go)


@main.command()
@click.argument("kind", type=click.Choice(list(fz.KINDS)))
@click.option("--size", type=click.IntRange(1, 3), default=1, show_default=True)
@common
def fuzz(kind, size, trunc, budget, seed, out, fmt):
    """Generate a random valid instance."""
    man = _manifest("fuzz", {"kind": kind, "size": size}, trunc, budget, seed, out, fmt)

    def go():
        obj = fz.generate(kind, seed, size)
        doc = fm.to_doc(obj)
        text = fm.dumps(doc)
        if out:
            fm.write(doc, out)
            click.echo(f"{kind} written to {out}")
        else:
            click.echo(text, nl=False)
        return EXIT_OK

    _run(go)


if __name__ == "__main__":  # pragma: no cover
    main()
