from fractions import Fraction

import pytest

from rcaforms.coxeter import build_coxeter
from rcaforms.irreps import get_irrep, irreps_of
from rcaforms.verify import expand_grid, load_config, sweep, verify_definiteness, verify_signature_formula


@pytest.mark.parametrize("c,a", [("1/4", "1"), ("1", "-1")])
def test_rank1_comparison(c, a):
    W = build_coxeter("A1")
    rep = verify_signature_formula(W, get_irrep(W, "triv"), c, 30)
    assert rep.a == a and rep.a_method == "rational-fit"
    assert rep.abs_match and rep.abs_deviation == 0
    assert rep.signed_ratio == a and rep.signed_match


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_zero_parameter_is_unitary(label):
    W = build_coxeter(label)
    for lam in irreps_of(W):
        rep = verify_signature_formula(W, lam, "0", 16, signed=False)
        assert rep.a == "1" and (rep.p, rep.q) == (lam.dim, 0) and rep.abs_match


def test_finite_dimensional_module_has_no_verdict():
    W = build_coxeter("A1")
    rep = verify_signature_formula(W, get_irrep(W, "triv"), "1/2", 20)
    assert not rep.full_support and rep.abs_match is None


def test_reports_are_reproducible():
    W = build_coxeter("A2")
    lam = get_irrep(W, "std")
    a = verify_signature_formula(W, lam, "0.4", 20, signed=False).to_dict()
    b = verify_signature_formula(W, lam, "0.4", 20, signed=False).to_dict()
    a.pop("runtimes"), b.pop("runtimes")
    assert a == b


def test_definiteness_rank1():
    W = build_coxeter("A1")
    for c, a in (("1/4", "1"), ("1", "-1")):
        rep = verify_definiteness(W, c)
        row = next(r for r in rep.rows if r.irrep == "triv")
        assert rep.ok and row.definite and row.a == a and row.quasi_unitary_ok


def test_definiteness_at_zero():
    W = build_coxeter("B2")
    rep = verify_definiteness(W, "0", N=12)
    assert rep.ok
    assert all(r.definite and r.q == 0 and r.margin == pytest.approx(1.0) for r in rep.rows)


def test_expand_grid():
    assert expand_grid({"start": "0.1", "stop": "0.45", "step": "0.05"}) == \
        [str(Fraction(k, 20)) for k in range(2, 10)]
    assert expand_grid({"start": 0, "stop": 1, "num": 3}) == ["0", "1/2", "1"]
    assert expand_grid([]) == [] and expand_grid(None) == []


def test_sweep_rank1_grids():
    low = sweep({"cells": [{"type": "A1", "irreps": ["triv"], "maxdeg": 24,
                            "c": {"start": "0.1", "stop": "0.45", "step": "0.05"}}]})
    high = sweep({"cells": [{"type": "A1", "irreps": ["triv"], "maxdeg": 24,
                             "c": {"start": "0.55", "stop": "1.45", "step": "0.1"}}]})
    assert len(low) == 8 and all(r["a"] == "1" for r in low)
    assert len(high) == 10 and all(r["a"] == "-1" for r in high)


def test_sweep_empty_grid():
    assert sweep({"cells": [{"type": "A1", "c": []}]}) == []
    assert sweep({}) == []


def test_sweep_isolates_failing_cells():
    out = sweep({"cells": [{"type": "A1", "irreps": ["triv"], "c": ["0.3+0.1j", "0.25"], "maxdeg": 20}]})
    assert [r["status"] for r in out] == ["error", "ok"]


def test_sweep_parallel_matches_serial(tmp_path):
    cfg = tmp_path / "grid.toml"
    cfg.write_text('workers = 2\n[[cells]]\ntype = "A1"\nc = ["0.2", "0.7"]\nmaxdeg = 20\n')
    par = sweep(load_config(str(cfg)))
    ser = sweep({"cells": load_config(str(cfg))["cells"]})
    strip = lambda rs: [{k: v for k, v in r.items() if k != "runtimes"} for r in rs]
    assert strip(par) == strip(ser)
