import pytest

from sullivan.cohomology import betti_table
from sullivan.model import ContractError, format_model, parse_model
from sullivan.purity import is_elliptic
from sullivan.rank import (
    construct_lemma_extension,
    extension_from_text,
    extension_summary,
    rank_bounds,
    search_lower_bound,
    verify_extension,
)
from sullivan.structure import two_stage_split

SUPPLIED = {"quartic": "quartic.ext", "odd-five": "odd-five.ext", "product": "product.ext"}


def supplied(corpus, name):
    text = format_model(corpus(SUPPLIED[name]))
    return verify_extension(extension_from_text(corpus(name), text))


@pytest.mark.parametrize("name, n", [("quartic", 1), ("odd-five", 3), ("product", 1)])
def test_supplied_extensions_verify(corpus, name, n):
    cert = supplied(corpus, name)
    assert cert.valid and cert.verdict == n
    assert [c for c, ok, _ in cert.audit if ok] == ["base", "restriction", "d_squared",
                                                    "ks_order", "elliptic"]
    assert cert.lines()[-1] == f"rk0 >= {n}"


def test_summary_shows_pure_ideal(corpus):
    lines = extension_summary(supplied(corpus, "product"))
    assert "pure_ideal = (x^2, a^3, w^2)" in lines
    assert "quotient_dim = 12" in lines


def _failing(fibre_text, total_text):
    return verify_extension(extension_from_text(parse_model(fibre_text), total_text))


def test_base_check_names_offending_generator(m2):
    cert = _failing("gen u1:3; gen u2:3; gen v12:5; d v12 = u1*u2",
                    "base a:4; gen u1:3; gen u2:3; gen v12:5; d v12 = u1*u2")
    assert not cert.valid and cert.verdict is None
    assert cert.failures()[0][0] == "base" and "a" in cert.failures()[0][1]
    assert len(cert.audit) == 1


def test_missing_fibre_generator_fails_base():
    cert = _failing("gen u1:3; gen u2:3; gen v12:5; d v12 = u1*u2",
                    "base a:2; gen u1:3; gen v12:5")
    assert cert.failures() == [("base", "fibre generators missing: u2")]


def test_restriction_failure_reports_residue():
    cert = _failing("gen u1:3; gen u2:3; gen v12:5; d v12 = u1*u2",
                    "base a:2; gen u1:3; gen u2:3; gen v12:5; d v12 = a^3")
    name, detail = cert.failures()[0]
    assert name == "restriction" and "v12" in detail and "-u1*u2" in detail


def test_d_squared_failure():
    fibre = "gen x:3; gen y:4; gen z:5"
    cert = _failing(fibre, "base a:2; gen x:3; gen y:4; gen z:5; d y = a*x; d z = a*y")
    name, detail = cert.failures()[0]
    assert name == "d_squared" and detail.startswith("D^2 z = ")


def test_ellipticity_failure():
    fibre = "gen w:2; gen v1:3; d v1 = w^2"
    cert = _failing(fibre, "base a:2; gen w:2; gen v1:3; d v1 = w^2")
    assert cert.failures() == [("elliptic", "pure ideal is not zero-dimensional")]
    assert [c for c, _, _ in cert.audit] == ["base", "restriction", "d_squared", "ks_order",
                                             "elliptic"]


def test_lemma_extension_rejects_even_generator(corpus):
    with pytest.raises(ValueError, match="even degree"):
        construct_lemma_extension(corpus("lemma-w"), None, ["w"])


def test_lemma_extension_rejects_non_v(m2):
    with pytest.raises(ValueError, match="not in V"):
        construct_lemma_extension(m2, two_stage_split(m2), ["u1"])


def test_empty_lemma_extension_is_fibre(m2):
    spec = construct_lemma_extension(m2, None, [])
    assert spec.n == 0 and spec.total.table.names == m2.table.names
    assert verify_extension(spec).valid


def test_lemma_extension_on_m2(m2):
    spec = construct_lemma_extension(m2, two_stage_split(m2), ["v12"])
    assert spec.base == ("a",)
    assert str(spec.total.d_gen("v12")) in ("a^3 + u1*u2", "u1*u2 + a^3")
    assert verify_extension(spec).verdict == 1


def test_base_names_avoid_collisions():
    m = parse_model("gen a:3; gen v:5")
    spec = construct_lemma_extension(m, None, ["v"])
    assert spec.base == ("a1",)
    m = parse_model("gen a1:3; gen a2:3; gen v:5; gen x:5")
    assert construct_lemma_extension(m, None, ["v", "x"]).base == ("a1'", "a2'")


def test_search_lemma_w(corpus):
    res = search_lower_bound(corpus("lemma-w"))
    assert res.n == 1 and res.expected == 1 and not res.defect and not res.partial
    assert res.certificate.spec.total.d_gen("v2") == res.certificate.spec.total.poly("a^2")


def test_search_even_sphere(corpus):
    res = search_lower_bound(corpus("even-sphere"))
    assert res.n == 0 and res.certificate.valid and res.expected == 0


def test_search_budget_marks_partial(corpus):
    res = search_lower_bound(corpus("lemma-w"), budget=1)
    # the full subset {v1, v2} is not elliptic; the budget stops before {v2}
    assert res.partial and res.tried == 1 and res.n == 0 and not res.defect


def test_search_defect_flag(corpus, monkeypatch):
    # force every nonempty candidate to fail so the predicted bound is missed
    import sullivan.rank as rank_mod
    real = rank_mod.verify_extension

    def only_empty(spec):
        cert = real(spec)
        if spec.n:
            cert.audit[-1] = ("elliptic", False, "forced")
        return cert

    monkeypatch.setattr(rank_mod, "verify_extension", only_empty)
    res = search_lower_bound(corpus("lemma-w"))
    assert res.n == 0 and res.expected == 1 and res.defect and not res.partial
    b = rank_bounds(corpus("lemma-w"))
    assert "search found 0 < expected 1" in b.annotations


def test_certificate_round_trip(corpus):
    for name in ("lemma-w", "odd-free-3", "odd-five"):
        fibre = corpus(name)
        cert = search_lower_bound(fibre).certificate
        again = verify_extension(extension_from_text(fibre, cert.spec.to_text()))
        assert again.valid and again.verdict == cert.verdict
        assert again.spec.total == cert.spec.total


@pytest.mark.parametrize("name", ["odd-free-2", "odd-free-3", "lemma-w", "odd-five"])
def test_monotone_under_removing_pairs(corpus, name):
    fibre = corpus(name)
    decomp = two_stage_split(fibre)
    cert = search_lower_bound(fibre, decomp).certificate
    total = cert.spec.total
    base_ids = {total.table.id_of(a) for a in total.base}
    perturbed = [g for g in fibre.table.names
                 if any(h in base_ids for m in total.d_gen(g).terms for h, _ in m)]
    assert len(perturbed) == cert.verdict
    for k in range(len(perturbed)):
        smaller = perturbed[:k] + perturbed[k + 1:]
        assert verify_extension(construct_lemma_extension(fibre, decomp, smaller)).valid


def test_bounds_m2(m2):
    b = rank_bounds(m2)
    assert (b.lower.value, b.upper.value, b.exact) == (1, 1, True)
    assert b.upper_thm.value == 1 and b.consistent and b.trc_holds


def test_bounds_sphere12(corpus):
    b = rank_bounds(corpus("sphere12"))
    assert b.upper_chi.value == 0 and b.lower.value == 0 and b.exact


def test_bounds_quartic_with_certificate(corpus):
    b = rank_bounds(corpus("quartic"), [supplied(corpus, "quartic")])
    assert b.dimV_minus_dimUeven == 0 and b.lower.value == 1
    assert b.upper_thm is None and b.upper_chi.value == 6
    assert "certified lower bound 1 exceeds dimV - dimU_even = 0" in b.annotations
    assert "rk0 is between 1 and 6" in b.annotations


def test_bounds_ignore_certificates_for_other_models(corpus, m2):
    b = rank_bounds(m2, [supplied(corpus, "quartic")])
    assert b.lower.source != "supplied extension certificate"


def test_bounds_on_nonmaximal_model_use_repair(corpus):
    b = rank_bounds(corpus("nonmaximal-v"))
    assert not b.maximal
    assert any(n.startswith("V enlarged from 1 to 2") for n in b.annotations)


def test_bounds_reject_non_elliptic(corpus):
    with pytest.raises(ContractError):
        rank_bounds(corpus("free-even"))


def test_bound_lines(m2):
    lines = rank_bounds(m2).lines()
    for key in ("rk0.lower = 1", "rk0.upper = 1", "rk0.exact = true", "trc.lhs = 6",
                "trc.rhs = 2^1", "trc.holds = true"):
        assert key in lines


def test_lemma_w_total_directly_elliptic(corpus):
    total = search_lower_bound(corpus("lemma-w")).certificate.spec.total
    assert [g.name for g in total.table] == ["a", "w", "v1", "v2"]
    ell = is_elliptic(total)
    fd = betti_table(total, elliptic=ell).formal_dimension
    assert fd == 4
    window = betti_table(total, fd + 6)
    assert all(window[n] == 0 for n in range(fd + 1, fd + 7))
