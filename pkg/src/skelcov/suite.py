"""Golden checks over the bundled example fixtures.

Each fixture file holds one JSON object.  The checks attached to a fixture
name recompute the known numbers for that object and compare them exactly,
so a corrupted fixture (say, an edited edge length) fails under its own
name instead of crashing the run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import io, presets
from .complex import require_valid_complex
from .coverenum import (are_isomorphic, count_index_subgroups_free, enumerate_coverings, fiber_product,
                        validate_rep, voltage_to_covering)
from .errors import SkelcovError
from .galois import (check_totally_split, check_unramified, closure_is_minimal, galois_closure,
                     is_galois, monodromy_group, quotient)
from .graph import require_valid
from .jacobian import (Divisor, cyclic_split_covers, divisor_class, divisor_of, is_principal,
                       tate_module_ranks, torsion_filtration, tropical_jacobian)
from .morphism import degree, is_covering, require_harmonic
from .rigid import automorphism_group, gluing_data_count, lifting_classes

FIXTURE_DIR = Path(__file__).with_name("fixtures")


@dataclass
class FixtureReport:
    name: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(ok for _, ok, _ in self.checks)

    def expect(self, label: str, got, want) -> None:
        self.checks.append((label, got == want, f"got {got!r}, expected {want!r}"))


def fixture_names(fixture_dir=None) -> list[str]:
    d = Path(fixture_dir) if fixture_dir else FIXTURE_DIR
    return sorted(p.stem for p in d.glob("*.json"))


def fixture_path(name: str, fixture_dir=None) -> Path:
    return (Path(fixture_dir) if fixture_dir else FIXTURE_DIR) / f"{name}.json"


def load_fixture(name: str, fixture_dir=None):
    return io.object_from_json(io.load_file(fixture_path(name, fixture_dir)))


def _period(obj):
    return [[str(x) for x in row] for row in tropical_jacobian(obj).period_matrix]


def _torsion_counts(rep: FixtureReport, cx, t: int, a: int) -> None:
    for n in (2, 3, 5):
        tf = torsion_filtration(cx, n)
        rep.expect(f"torsion n={n}", (tf["toric"], tf["connected"], tf["total"]),
                   (n**t, n ** (t + 2 * a), n ** (2 * (t + a))))
        rep.expect(f"split covers n={n}", len(cyclic_split_covers(cx, n)), n**t)


def check_tate(rep: FixtureReport, cx) -> None:
    require_valid_complex(cx)
    rep.expect("period matrix", _period(cx), [["2"]])
    tf = torsion_filtration(cx, 2)
    rep.expect("2-torsion", (tf["toric"], tf["connected"], tf["total"]), (2, 2, 4))
    covers = cyclic_split_covers(cx, 2)
    nontrivial = [lab for lab, _ in covers if any(lab.values())]
    rep.expect("nontrivial totally split classes", len(nontrivial), 1)
    for _, r in covers:
        _, phi = voltage_to_covering(r, cx)
        rep.expect("split cover is unramified", check_totally_split(phi) and check_unramified(phi), True)
    _torsion_counts(rep, cx, 1, 0)
    g = cx.graph
    d = Divisor.on(g, [("v1", 1), ("v2", -1)])
    rep.expect("v1 - v2 principal", is_principal(g, d)[0], False)
    ok, f = is_principal(g, d.scaled(2))
    rep.expect("2(v1 - v2) principal", ok, True)
    if f is not None:
        rep.expect("witness divisor", divisor_of(f) == d.scaled(2), True)
        rep.expect("class of witness divisor", divisor_class(g, divisor_of(f)).is_zero(), True)


def check_genus2(rep: FixtureReport, cx) -> None:
    require_valid_complex(cx)
    rep.expect("period matrix", _period(cx), [["2"]])
    rep.expect("Tate module ranks", tate_module_ranks(cx), {"toric": 1, "connected": 3, "total": 4})
    tf = torsion_filtration(cx, 2)
    rep.expect("2-torsion", (tf["toric"], tf["connected"], tf["total"]), (2, 8, 16))
    _torsion_counts(rep, cx, 1, 1)


def check_c2(rep: FixtureReport, g) -> None:
    require_valid(g)
    rep.expect("period matrix", _period(g), [["2"]])
    rep.expect("connected cover counts", [len(enumerate_coverings(g, n, True)) for n in range(1, 5)],
               [1, 1, 1, 1])
    rep.expect("Hall counts r=1", [count_index_subgroups_free(1, n) for n in range(1, 5)], [1, 1, 1, 1])


def check_theta2(rep: FixtureReport, g) -> None:
    require_valid(g)
    rep.expect("period matrix", _period(g), [["2", "1"], ["1", "2"]])
    rep.expect("connected cover counts", [len(enumerate_coverings(g, n, True)) for n in range(1, 5)],
               [1, 3, 7, 26])
    rep.expect("Hall counts r=2", [count_index_subgroups_free(2, n) for n in range(1, 5)], [1, 3, 13, 71])


def check_tate_cover(rep: FixtureReport, phi) -> None:
    require_harmonic(phi)
    rep.expect("is covering", is_covering(phi), True)
    rep.expect("degree", degree(phi), 2)
    rep.expect("gluing data", gluing_data_count(phi), 4)
    auts = automorphism_group(phi)
    rep.expect("automorphisms", len(auts), 4)
    lc = lifting_classes(phi, auts)
    rep.expect("lifting classes", sorted((c.orbit_size, c.stabilizer_order) for c in lc.classes),
               [(2, 2), (2, 2)])
    rep.expect("Burnside", lc.burnside_ok, True)
    rep.expect("trivialization independent", lc.trivialization_independent, True)


def check_c2_double_cover(rep: FixtureReport, r) -> None:
    validate_rep(r)
    _, phi = voltage_to_covering(r)
    rep.expect("is covering", is_covering(phi), True)
    rep.expect("totally split", check_totally_split(phi), True)
    fp = fiber_product(r, r)
    rep.expect("fiber product components", len(fp.components), 2)
    rep.expect("components isomorphic to input", [are_isomorphic(c, r) for c in fp.component_reps],
               [True, True])
    p1, p2 = fp.projections
    rep.expect("projections differ", p1 != p2, True)


def check_s3_cover(rep: FixtureReport, r) -> None:
    validate_rep(r)
    grp = monodromy_group(r)
    rep.expect("monodromy order", grp.order, 6)
    rep.expect("input Galois", is_galois(r), False)
    gc = galois_closure(r)
    rep.expect("closure degree", gc.rep.degree, 6)
    rep.expect("closure Galois", is_galois(gc.rep), True)
    rep.expect("stabilizer order", len(gc.stabilizer), 2)
    rep.expect("quotient recovers input", are_isomorphic(quotient(gc.rep, gc.stabilizer_deck), r), True)
    rep.expect("closure minimal", closure_is_minimal(r), True)


CHECKS: dict[str, Callable[[FixtureReport, object], None]] = {
    "c2": check_c2,
    "c2-double-cover": check_c2_double_cover,
    "genus2": check_genus2,
    "s3-cover": check_s3_cover,
    "tate": check_tate,
    "tate-cover": check_tate_cover,
    "theta2": check_theta2,
}


def run_fixture(name: str, fixture_dir=None) -> FixtureReport:
    rep = FixtureReport(name)
    check = CHECKS.get(name)
    if check is None:
        rep.error = "no golden checks registered for this fixture"
        return rep
    try:
        check(rep, load_fixture(name, fixture_dir))
    except (SkelcovError, OSError) as err:
        rep.error = f"{type(err).__name__}: {err}"
    return rep


def run_paper_suite(fixture_dir=None) -> list[FixtureReport]:
    """Every fixture's golden checks, in fixture-name order."""
    return [run_fixture(name, fixture_dir) for name in fixture_names(fixture_dir)]


def write_fixtures(fixture_dir) -> list[Path]:
    """Regenerate the fixture files from :mod:`skelcov.presets`."""
    d = Path(fixture_dir)
    d.mkdir(parents=True, exist_ok=True)
    out = []
    for name, make in sorted(presets.PRESETS.items()):
        data = io.object_to_json(make())
        if name == "tate-cover":
            data["gluing"] = {"f1": "0 mod 2", "f2": "0 mod 2"}
        path = d / f"{name}.json"
        path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        out.append(path)
    return out
