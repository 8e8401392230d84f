import pytest

import lfhh

APPEND = lfhh.append_signature()
QUERY = "append (cons z nil) (cons (s z) nil) L"


def test_check_counts_declarations():
    assert lfhh.check(APPEND) == 9
    assert lfhh.check("") == 0


def test_bad_input_raises():
    with pytest.raises(lfhh.LfError):
        lfhh.check("nat : type. c : d.")
    with pytest.raises(ValueError):
        lfhh.translate(APPEND, mode="clever")


def test_translate_drops_rigid_guards():
    opt = dict(lfhh.translate(APPEND))
    naive = dict(lfhh.translate(APPEND, mode="naive"))
    assert opt.keys() == naive.keys()
    assert opt["appNil"].count("top") == 1
    assert "top" not in opt["s"]
    assert "top" not in "".join(naive.values())


def test_analyze():
    plans = lfhh.analyze(APPEND)
    assert plans["appNil"] == {"K": True}
    assert plans["s"] == {"arg1": False}


@pytest.mark.parametrize("mode,deepen", [("optimized", False), ("naive", True)])
def test_solve_append(mode, deepen):
    r = lfhh.solve(APPEND, QUERY, mode=mode, iterative_deepening=deepen)
    assert r["mode"] == mode
    [a] = r["answers"]
    assert a["certified"]
    assert a["bindings"] == {"L": "cons z (cons (s z) nil)"}


def test_solve_all_splits():
    r = lfhh.solve(APPEND, "append X Y (cons z nil)", max_answers=0)
    assert r["status"] == "exhausted"
    assert len(r["answers"]) == 2


def test_bench_counts():
    rows = {(r["n"], r["mode"]): r["backchain_steps"] for r in lfhh.bench([0, 3])}
    assert rows == {(0, "naive"): 2, (0, "optimized"): 1, (3, "naive"): 92, (3, "optimized"): 4}
