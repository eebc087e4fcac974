"""``skelcov`` command line.

Every subcommand reads JSON files, runs one library operation and writes a
single deterministic report.  Exit status: 0 success, 1 validation failure,
2 usage error or unreadable input, 3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from . import perm as P
from .bounds import Bounds, default_bounds
from .complex import MetrizedComplex, validate_complex
from .coverenum import (CoveringRep, are_isomorphic, count_abelian_tame_covers, count_index_subgroups_free,
                        count_transitive_tuples, enumerate_coverings, fiber_product, validate_rep)
from .errors import InvalidInput, ResourceBoundExceeded
from .galois import (classify_abelian_covers, closure_is_minimal, galois_closure, is_galois,
                     monodromy_group, quotient)
from .graph import AugmentedMetricGraph, validate_graph
from .jacobian import divisor_class, is_principal, torsion_filtration, tropical_jacobian
from .morphism import (HarmonicMorphism, check_local_rh, component_degrees, degree, is_covering, is_finite,
                       is_tame, validate_harmonic)
from .rigid import (format_gluing, gluing_data_count, lifting_classes, moduli, normalize_gluing,
                    rigidified_morphism_check)
from .suite import FIXTURE_DIR, fixture_names, run_paper_suite

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class Workspace:
    """Objects loaded for one invocation plus the run configuration."""

    bounds: Bounds = field(default_factory=default_bounds)
    residue_char: int | None = None
    fmt: str = "json"
    objects: dict[str, object] = field(default_factory=dict)
    raw: dict[str, object] = field(default_factory=dict)

    def read(self, path: str):
        """Parse a JSON file; a bare fixture name like ``tate.json`` falls back to the bundled copy."""
        p = Path(path)
        if not p.exists():
            bundled = FIXTURE_DIR / p.name
            if p.parent == Path(".") and bundled.exists():
                p = bundled
            else:
                raise UsageError(f"{path}: no such file")
        name = p.stem
        if name in self.raw:
            k = 2
            while f"{name}#{k}" in self.raw:
                k += 1
            name = f"{name}#{k}"
        data = io.load_file(p)
        self.raw[name] = data
        return name, data

    def load(self, path: str, kind: str | None = None):
        name, data = self.read(path)
        found = io.kind_of(data)
        if kind == "complex" and found == "graph":
            found = "complex"
        if kind is not None and found != kind and not (kind == "graph" and found == "complex"):
            raise InvalidInput(f"{path}: expected a {kind}, found a {found}")
        if kind == "complex":
            obj = io.complex_from_json(data)
        elif kind == "graph":
            obj = io.graph_from_json(data)
        else:
            obj = io.object_from_json(data)
        obj = self._with_char(obj)
        self.objects[name] = obj
        return obj

    def _with_char(self, obj):
        p = self.residue_char
        if p is None:
            return obj
        if isinstance(obj, MetrizedComplex):
            return MetrizedComplex(obj.graph, obj.curves, p)
        if isinstance(obj, HarmonicMorphism):
            return HarmonicMorphism(self._with_char(obj.source), self._with_char(obj.target), obj.vertex_map,
                                    obj.edge_map, obj.dilation, obj.vertex_degree, obj.mark_map)
        return obj

    def complex(self, path: str) -> MetrizedComplex:
        obj = self.load(path, "complex")
        require(validate_complex(obj))
        return obj

    def graph(self, path: str) -> AugmentedMetricGraph:
        obj = self.load(path, "graph")
        require(validate_graph(obj))
        return obj

    def morphism(self, path: str) -> HarmonicMorphism:
        phi = self.load(path, "morphism")
        require(validate_harmonic(phi))
        return phi

    def covering(self, path: str) -> CoveringRep:
        rep = self.load(path, "covering")
        validate_rep(rep)
        return rep


class ValidationFailed(Exception):
    def __init__(self, report):
        super().__init__("; ".join(map(str, report)))
        self.report = report


def require(report) -> None:
    if not report.ok:
        raise ValidationFailed(report)


def _fracs(xs):
    return [str(x) for x in xs]


def _violations(report):
    return [{"code": v.code, "where": v.where, "detail": v.detail} for v in report]


# subcommands; each returns (report dict, exit status)

def cmd_validate(ws: Workspace, args):
    results = []
    status = EXIT_OK
    for path in args.files:
        obj = ws.load(path)
        if isinstance(obj, AugmentedMetricGraph):
            report = validate_graph(obj)
        elif isinstance(obj, MetrizedComplex):
            report = validate_complex(obj)
        elif isinstance(obj, HarmonicMorphism):
            report = validate_harmonic(obj)
        else:
            try:
                validate_rep(obj)
                report = validate_graph(obj.base)
            except InvalidInput as err:
                results.append({"file": path, "status": "invalid", "violations": [{"code": str(err)}]})
                status = EXIT_INVALID
                continue
        entry = {"file": path, "status": "valid" if report.ok else "invalid"}
        if not report.ok:
            entry["violations"] = _violations(report)
            status = EXIT_INVALID
        if report.warnings:
            entry["warnings"] = list(report.warnings)
        results.append(entry)
    if len(results) == 1:
        return results[0], status
    return {"results": results}, status


def cmd_check_morphism(ws: Workspace, args):
    phi = ws.load(args.file, "morphism")
    report = validate_harmonic(phi)
    if not report.ok:
        return {"harmonic": False, "violations": _violations(report)}, EXIT_INVALID
    rh = check_local_rh(phi)
    out = {"harmonic": True, "finite": is_finite(phi), "tame": is_tame(phi), "local_rh": rh.ok,
           "covering": is_covering(phi), "component_degrees": component_degrees(phi)}
    if not rh.ok:
        out["violations"] = _violations(rh)
    return out, EXIT_OK


def cmd_degree(ws: Workspace, args):
    obj = ws.load(args.file)
    if isinstance(obj, CoveringRep):
        validate_rep(obj)
        return {"degree": obj.degree}, EXIT_OK
    if not isinstance(obj, HarmonicMorphism):
        raise InvalidInput("degree needs a morphism or a covering")
    require(validate_harmonic(obj))
    return {"degree": degree(obj), "component_degrees": component_degrees(obj)}, EXIT_OK


def cmd_enumerate(ws: Workspace, args):
    g = ws.graph(args.file)
    reps = enumerate_coverings(g, args.degree, args.connected, ws.bounds)
    covers = [{"voltages": {e: P.to_oneline(rep.voltages[e]) for e in rep.cotree}} for rep in reps]
    return {"degree": args.degree, "connected": args.connected, "count": len(reps),
            "tree": list(reps[0].spanning_tree) if reps else [], "coverings": covers}, EXIT_OK


def cmd_count_subgroups(ws: Workspace, args):
    ws.bounds.check("max_degree", args.index)
    return {"rank": args.rank, "index": args.index,
            "subgroups": count_index_subgroups_free(args.rank, args.index),
            "transitive_tuples": count_transitive_tuples(args.rank, args.index)}, EXIT_OK


def cmd_count_abelian(ws: Workspace, args):
    p = ws.residue_char or 0
    return {"genus": args.genus, "punctures": args.punctures, "order": args.order,
            "count": count_abelian_tame_covers(args.genus, args.punctures, args.order, p)}, EXIT_OK


def cmd_fiber_product(ws: Workspace, args):
    r1, r2 = ws.covering(args.first), ws.covering(args.second)
    fp = fiber_product(r1, r2)
    return {"degree": fp.rep.degree, "components": len(fp.components),
            "sheets": [list(c) for c in fp.components],
            "isomorphic_to_first": [are_isomorphic(c, r1) for c in fp.component_reps],
            "projections_equal": fp.projections[0] == fp.projections[1],
            "covering": io.rep_to_json(fp.rep)}, EXIT_OK


def cmd_gluing_count(ws: Workspace, args):
    phi = ws.morphism(args.file)
    return {"moduli": moduli(phi), "gluing_count": gluing_data_count(phi)}, EXIT_OK


def cmd_lifting_classes(ws: Workspace, args):
    phi = ws.morphism(args.file)
    lc = lifting_classes(phi, bounds=ws.bounds)
    mods = moduli(phi)
    classes = [{"representative": format_gluing(c.representative, mods), "orbit_size": c.orbit_size,
                "stabilizer_order": c.stabilizer_order} for c in lc.classes]
    return {"automorphisms": lc.group_order, "gluing_count": lc.gluing_count, "classes": classes,
            "burnside_ok": lc.burnside_ok, "trivialization_independent": lc.trivialization_independent}, EXIT_OK


def _rigid_side(ws: Workspace, data, what: str):
    if isinstance(data, str):
        _, data = ws.read(data)
    if not isinstance(data, dict) or "covering" not in data:
        raise InvalidInput(f"{what} needs a 'covering' and a 'gluing'")
    cov = data["covering"]
    if isinstance(cov, str):
        _, cov = ws.read(cov)
    phi = ws._with_char(io.morphism_from_json(cov))
    require(validate_harmonic(phi))
    return phi, normalize_gluing(phi, data.get("gluing", cov.get("gluing", {})))


def cmd_check_rigid(ws: Workspace, args):
    _, data = ws.read(args.file)
    if not isinstance(data, dict) or "first" not in data or "second" not in data:
        raise InvalidInput("rigid-morphism input needs 'first' and 'second'")
    first = _rigid_side(ws, data["first"], "first")
    second = _rigid_side(ws, data["second"], "second")
    psi_data = data.get("psi", {"vertex_map": {v: v for v in first[0].source.graph.vertex_ids},
                                "edge_map": {e.id: e.id for e in first[0].source.graph.edges}})
    psi = io.morphism_from_json(psi_data, first[0].source, second[0].source)
    corrections = {}
    for c in data.get("corrections", []):
        corrections[(str(c["vertex"]), str(c["edge"]))] = int(c["residue"])
    ok = rigidified_morphism_check(psi, first, second, corrections)
    return {"morphism": ok}, EXIT_OK


def cmd_jacobian(ws: Workspace, args):
    g = ws.graph(args.file)
    jac = tropical_jacobian(g)
    return {"dimension": jac.dimension, "root": jac.root, "cotree": list(jac.cotree),
            "cycles": [{e: c for e, c in cyc.items()} for cyc in jac.cycles],
            "period_matrix": [_fracs(row) for row in jac.period_matrix]}, EXIT_OK


def _divisor_arg(ws: Workspace, g, text: str):
    p = Path(text)
    data = io.load_file(p) if not text.lstrip().startswith("[") and p.exists() else io.loads(text, "--divisor")
    return io.divisor_from_json(g, data)


def cmd_divisor_class(ws: Workspace, args):
    g = ws.graph(args.file)
    d = _divisor_arg(ws, g, args.divisor)
    cls = divisor_class(g, d)
    principal, f = is_principal(g, d)
    out = {"divisor": io.divisor_to_json(d), "vector": _fracs(cls.vector),
           "lattice_coords": _fracs(cls.lattice_coords), "principal": principal}
    if f is not None:
        out["witness"] = {"graph": io.graph_to_json(f.graph),
                          "slopes": {e: str(s) for e, s in f.slopes.items()},
                          "values": {v: str(x) for v, x in f.values.items()}}
    return out, EXIT_OK


def cmd_torsion(ws: Workspace, args):
    cx = ws.complex(args.file)
    tf = torsion_filtration(cx, args.order, ws.residue_char)
    return {"toric": tf["toric"], "connected": tf["connected"], "total": tf["total"]}, EXIT_OK


def _parse_selection(text: str):
    """``v1,v2:e1`` selects vertices v1, v2 and edge e1 (leaves at them are kept)."""
    verts, _, edges = text.partition(":")
    vs = [v for v in verts.split(",") if v]
    es = [e for e in edges.split(",") if e]
    if not vs:
        raise UsageError("--subcomplex needs at least one vertex, as 'v1,v2:e1'")
    return vs, es


def cmd_classify(ws: Workspace, args):
    cx = ws.complex(args.file)
    sub = _parse_selection(args.subcomplex) if args.subcomplex else None
    return classify_abelian_covers(cx, args.order, sub, ws.residue_char, ws.bounds), EXIT_OK


def cmd_monodromy(ws: Workspace, args):
    rep = ws.covering(args.file)
    grp = monodromy_group(rep, ws.bounds)
    out = {"degree": rep.degree, "order": grp.order, "transitive": grp.transitive,
           "generators": [P.format_cycles(g) for g in grp.generators]}
    if grp.transitive:
        out["galois"] = is_galois(rep, ws.bounds)
    return out, EXIT_OK


def cmd_galois_closure(ws: Workspace, args):
    rep = ws.covering(args.file)
    gc = galois_closure(rep, ws.bounds)
    back = quotient(gc.rep, gc.stabilizer_deck)
    return {"degree": gc.rep.degree, "group_order": gc.group.order, "galois": is_galois(gc.rep, ws.bounds),
            "stabilizer": [P.format_cycles(h) for h in gc.stabilizer],
            "quotient_isomorphic_to_input": are_isomorphic(back, rep),
            "minimal": closure_is_minimal(rep, ws.bounds),
            "closure": io.rep_to_json(gc.rep, cycles=True)}, EXIT_OK


def cmd_paper_suite(ws: Workspace, args):
    if args.list:
        return {"fixtures": fixture_names(args.fixtures)}, EXIT_OK
    reports = run_paper_suite(args.fixtures)
    out = []
    for r in reports:
        entry = {"fixture": r.name, "status": "pass" if r.ok else "fail", "checks": len(r.checks)}
        failed = [f"{label}: {detail}" for label, ok, detail in r.checks if not ok]
        if r.error:
            failed.append(r.error)
        if failed:
            entry["failures"] = failed
        out.append(entry)
    ok = all(r.ok for r in reports)
    return {"fixtures": out, "passed": sum(r.ok for r in reports), "total": len(reports)}, \
        EXIT_OK if ok else EXIT_INVALID


def _common(p: argparse.ArgumentParser, top: bool = False) -> None:
    # subcommands repeat the flags without defaults so they don't clobber the top-level ones
    kw = {} if top else {"default": argparse.SUPPRESS}
    p.add_argument("--bound", help="resource bound override, e.g. 'max_degree=8' or a single integer", **kw)
    p.add_argument("--char", type=int, dest="char", metavar="p", help="override the residue characteristic",
                   **kw)
    p.add_argument("--format", choices=("json", "table"), **({"default": "json"} if top else kw))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skelcov", description="Combinatorics of tame coverings of skeleta.")
    _common(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "validate graphs, complexes, morphisms or coverings")
    p.add_argument("files", nargs="+")
    add("check-morphism", cmd_check_morphism, "harmonicity, tameness and covering checks").add_argument("file")
    add("degree", cmd_degree, "degree of a morphism or covering").add_argument("file")
    p = add("enumerate-coverings", cmd_enumerate, "covers of a graph up to isomorphism")
    p.add_argument("file")
    p.add_argument("--degree", "-n", type=int, required=True)
    p.add_argument("--connected", action="store_true")
    p = add("count-subgroups", cmd_count_subgroups, "index-n subgroups of a free group")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--index", type=int, required=True)
    p = add("count-abelian", cmd_count_abelian, "Z/n covers of a punctured curve")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--punctures", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p = add("fiber-product", cmd_fiber_product, "fiber product of two coverings")
    p.add_argument("first")
    p.add_argument("second")
    add("gluing-count", cmd_gluing_count, "size of the gluing-data group").add_argument("file")
    add("lifting-classes", cmd_lifting_classes, "orbits of gluing data under automorphisms").add_argument("file")
    add("check-rigid-morphism", cmd_check_rigid, "is a map a morphism of rigidified coverings").add_argument("file")
    add("jacobian", cmd_jacobian, "period matrix of the tropical Jacobian").add_argument("file")
    p = add("divisor-class", cmd_divisor_class, "class of a degree-0 divisor in the Jacobian")
    p.add_argument("file")
    p.add_argument("--divisor", required=True, help="divisor JSON or a file holding it")
    p = add("torsion", cmd_torsion, "n-torsion counts of the toric, connected and full parts")
    p.add_argument("file")
    p.add_argument("--order", type=int, required=True)
    p = add("classify", cmd_classify, "stratify cyclic covers by splitting behaviour")
    p.add_argument("file")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--subcomplex", help="selection 'v1,v2:e1' of vertices and edges")
    add("monodromy", cmd_monodromy, "monodromy group of a covering").add_argument("file")
    add("galois-closure", cmd_galois_closure, "Galois closure and its stabilizer").add_argument("file")
    p = add("paper-suite", cmd_paper_suite, "run the golden checks on the bundled fixtures")
    p.add_argument("--list", action="store_true", help="list fixture names without running")
    p.add_argument("--fixtures", help="directory of fixture files (default: bundled)")
    return parser


def render_table(report, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(report, dict):
        for k, v in report.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                       (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.extend(render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {io.dumps(v) if isinstance(v, (dict, list)) else _scalar(v)}")
    elif isinstance(report, list):
        for item in report:
            sub = render_table(item, indent + 1)
            if sub:
                lines.append(f"{pad}- {sub[0].strip()}")
                lines.extend(sub[1:])
    else:
        lines.append(pad + _scalar(report))
    return lines


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def emit(report, fmt: str, out) -> None:
    if fmt == "table":
        if isinstance(report, dict) and report.get("status") == "valid" and len(report) <= 3:
            out.write("valid\n")
            return
        out.write("\n".join(render_table(report)) + "\n")
    else:
        out.write(io.dumps(report) + "\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        bounds = default_bounds().with_overrides(args.bound)
    except InvalidInput as exc:
        err.write(f"skelcov: {exc}\n")
        return EXIT_USAGE
    if args.char is not None and args.char < 0:
        err.write("skelcov: --char must be non-negative\n")
        return EXIT_USAGE
    ws = Workspace(bounds, args.char, args.format)
    try:
        report, status = args.func(ws, args)
    except (UsageError, io.MalformedJSON) as exc:
        err.write(f"skelcov: {exc}\n")
        return EXIT_USAGE
    except ValidationFailed as exc:
        emit({"status": "invalid", "violations": _violations(exc.report)}, ws.fmt, out)
        return EXIT_INVALID
    except ResourceBoundExceeded as exc:
        err.write(f"skelcov: resource bound exceeded: {exc}\n")
        return EXIT_BOUND
    except InvalidInput as exc:
        err.write(f"skelcov: {exc}\n")
        return EXIT_INVALID
    emit(report, ws.fmt, out)
    return status


if __name__ == "__main__":
    sys.exit(main())
