"""Complexity metrics against hand-tabulated oracles."""

import pytest

from clonesca.metrics import (
    ComplexityScore,
    complexity,
    compute_metrics,
    function_is_trivial,
    is_trivial,
)

from conftest import big_method, getter_setter, one_class


def fn_named(src, name):
    for unit in [one_class(src)]:
        for fn in unit.functions:
            if fn.name == name:
                return fn
    raise KeyError(name)


def test_empty_body_metrics():
    m = compute_metrics(fn_named("class C { void f(){} }", "f"))
    assert (m.loc, m.cc, m.hv) == (1, 1, 0.0)
    assert complexity(m).value == pytest.approx(0.23)


def test_identity_function_hand_tabulated():
    # body tokens: '{' 'return' 'x' ';' ('}' pair-skipped)
    # operators {, return, ; -> 3 occurrences; operand x -> 1
    # N=4, eta=4, HV = 4*log2(4) = 8
    m = compute_metrics(fn_named("class C { int id(int x) { return x; } }", "id"))
    assert m.hv == pytest.approx(8.0)
    assert m.cc == 1
    assert m.loc == 1


def test_cyclomatic_all_decision_kinds():
    src = """class C {
      int f(int a, int b) {
        if (a > 0 && b > 0) { a++; }
        for (int i = 0; i < a; i++) { b += i; }
        while (b > 10) { b--; }
        do { a--; } while (a > 3);
        switch (a) { case 1: break; case 2: break; default: break; }
        try { b = a / b; } catch (ArithmeticException e) { b = 0; }
        int c = a > b ? a : b;
        boolean d = a > 1 || b > 1;
        return c;
      }
    }"""
    m = compute_metrics(fn_named(src, "f"))
    # if + && + for + while + do + 2 case labels + catch + ternary + || = 10
    assert m.cc == 11


def test_foreach_counts_as_decision():
    src = "class C { int f(int[] xs) { int s = 0; for (int x : xs) { s += x; } return s; } }"
    assert compute_metrics(fn_named(src, "f")).cc == 2


def test_listing_shaped_functions_match_printed_scores():
    copier = """class Deploy {
      private static void copyAllJars(String outputDir) {
        File out = new File(outputDir);
        String targetPath = out.getAbsolutePath() + "lib";
        File current = new File(".");
        String path = current.getCanonicalPath();
        String libPath = path + File.separatorChar + "lib";
        Utils.copyFolder(libPath, targetPath, "jar");
      }
    }"""
    builder = """class Params {
      public MParam newParam(String name, String type) {
        MParam p = new MParam();
        p.setName(name);
        p.setType(type);
        return p;
      }
    }"""
    hard = complexity(compute_metrics(fn_named(copier, "copyAllJars"))).value
    easy = complexity(compute_metrics(fn_named(builder, "newParam"))).value
    assert hard == pytest.approx(63, abs=20)
    assert easy == pytest.approx(52, abs=20)
    assert not is_trivial(ComplexityScore(hard))
    assert is_trivial(ComplexityScore(easy))


def test_triviality_boundary_is_strict():
    assert is_trivial(ComplexityScore(59.999))
    assert not is_trivial(ComplexityScore(60.0))
    assert not is_trivial(ComplexityScore(63.0))
    assert is_trivial(ComplexityScore(52.0))


def test_threshold_is_configurable():
    assert not is_trivial(ComplexityScore(55.0), threshold=50.0)
    assert is_trivial(ComplexityScore(55.0), threshold=70.0)


def test_linear_form_available():
    m = compute_metrics(fn_named("class C { int id(int x) { return x; } }", "id"))
    linear = complexity(m, mi_form="linear").value
    assert linear == pytest.approx(5.2 * 8.0 + 0.23 * 1 + 16.2 * 1)
    with pytest.raises(ValueError):
        complexity(m, mi_form="cubic")


def test_generated_getters_setters_trivial():
    body = "\n".join(getter_setter(f"field{i}") for i in range(6))
    unit = one_class(f"class Data {{\n{body}\n}}")
    fns = [fn for fn in unit.functions if fn.has_body]
    assert len(fns) == 12
    assert all(function_is_trivial(fn) for fn in fns)


def test_generated_algorithmic_functions_not_trivial():
    for seed in range(6):
        unit = one_class(f"class Algo {{\n{big_method('run', seed)}\n}}")
        fn = unit.functions[0]
        score = complexity(compute_metrics(fn)).value
        assert score > 60, f"seed {seed} scored {score}"


def test_rename_leaves_metrics_unchanged():
    a = fn_named("class C { int f(int alpha) { int beta = alpha * 2; return beta + alpha; } }", "f")
    b = fn_named("class C { int f(int gamma) { int delta = gamma * 2; return delta + gamma; } }", "f")
    assert compute_metrics(a) == compute_metrics(b)


def test_duplicating_a_statement_never_lowers_score():
    base = "class C { int f(int x) { int y = x + 1; return y; } }"
    more = "class C { int f(int x) { int y = x + 1; y = x + 1; return y; } }"
    s1 = complexity(compute_metrics(fn_named(base, "f"))).value
    s2 = complexity(compute_metrics(fn_named(more, "f"))).value
    assert s2 >= s1


def test_bodyless_function_rejected():
    unit = one_class("interface I { int f(); }")
    with pytest.raises(ValueError):
        compute_metrics(unit.functions[0])
    assert function_is_trivial(unit.functions[0])  # vacuously
