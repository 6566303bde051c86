"""CLI invocations whose reports are frozen under tests/golden.

Regenerate with ``python3 tests/golden_cases.py`` after an intended change.
"""

from pathlib import Path

GOLDEN_DIR = Path(__file__).parent / "golden"

# (report name, argv, expected exit code)
CASES = [
    ("check_polyform_1_1", ["check-polysymplectic", "polyform_1_1"], 0),
    ("check_polyform_1_2", ["check-polysymplectic", "polyform_1_2"], 0),
    ("check_polyform_2_2", ["check-polysymplectic", "polyform_2_2"], 0),
    ("check_degenerate", ["check-polysymplectic", "degenerate"], 1),
    ("from_polyform_2_2", ["from-polysymplectic", "polyform_2_2", "--scalar", "exact"], 0),
    ("dirac_r4", ["dirac", "dirac_r4", "--scalar", "exact"], 0),
    ("whitney_tangent_1_2", ["whitney", "tangent_1_2", "--crosscheck", "from-polysymplectic"], 0),
    ("whitney_so3_action", ["whitney", "so3_action"], 0),
    ("reduce_1_2", ["reduce", "reduction_1_2", "--scalar", "exact"], 0),
    ("gstar_so3_isotropic", ["gstar", "--algebra", "so3", "--mu", "[[0,0,1],[0,0,1]]",
                             "--crosscheck", "cotangent-group"], 0),
    ("integrability_nonjacobi3", ["integrability", "--algebra", "nonjacobi3", "--k", "2"], 1),
    ("integrability_sl2", ["integrability", "--algebra", "sl2"], 0),
    ("orbit_form_so3", ["orbit-form", "--algebra", "so3", "--mu", "[[0,0,1]]"], 0),
    ("cotangent_group_heisenberg3", ["cotangent-group", "--algebra", "heisenberg3", "--k", "2",
                                     "--mu", '[[1,0,2],[0,1,"1/2"]]', "--crosscheck", "gstar"], 0),
    ("principal_local_so3", ["principal-local", "--algebra", "so3", "--m-base", "1", "--k", "2"], 0),
    ("check_polyform_1_2_text", ["check-polysymplectic", "polyform_1_2", "--format", "text"], 0),
]


def golden_path(name: str, argv: list) -> Path:
    suffix = ".txt" if "text" in argv else ".json"
    return GOLDEN_DIR / f"{name}{suffix}"


if __name__ == "__main__":
    from kpoly.cli import run

    for name, argv, expected in CASES:
        code, out, err = run(argv)
        if code != expected:
            raise SystemExit(f"{name}: exit {code}, expected {expected}\n{err}")
        golden_path(name, argv).write_text(out, encoding="utf-8")
        print(f"wrote {golden_path(name, argv).name}")
