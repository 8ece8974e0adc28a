import dataclasses
import json

import pytest

from kummercert.kummer import CertificateFailure
from kummercert.ledger import (
    Axiom,
    Claim,
    Fact,
    FactStore,
    GroupRef,
    InconsistentFactError,
    MissingInputError,
    ParameterMismatchError,
    SCRIPT_FORMAT,
    Script,
    ScriptFormatError,
    SpaceDecl,
    Step,
    UnknownRuleError,
    apply_rule,
    check_script,
    leaf_facts_from_computation,
    parse_script,
    script_to_json_dict,
    without_axiom,
    without_step,
)
from kummercert.linalg import FinAbGroup

SPACES = frozenset({"X", "Y", "Z", "(X,Y)"})


def ref(space, degree):
    return GroupRef(space, degree)


def store_with(*facts):
    store = FactStore(SPACES)
    for i, fact in enumerate(facts):
        store.add(fact, ("axiom", f"a{i}"))
    return store


# ------------------------------------------------------------- the fact store


def test_closure_is_zero_implies_torsion_free():
    store = store_with(Fact(ref("X", 3), Claim.is_zero()))
    assert Fact(ref("X", 3), Claim.torsion_free()) in store
    assert Fact(ref("X", 3), Claim.only_primes(())) in store


def test_closure_iso_to_bounds_primes():
    store = store_with(Fact(ref("X", 3), Claim.iso_to(FinAbGroup(2, (3, 9)))))
    assert Fact(ref("X", 3), Claim.only_primes((3,))) in store
    assert Fact(ref("X", 3), Claim.torsion_free()) not in store


def test_contradiction_detection_is_symmetric():
    bad = Claim.iso_to(FinAbGroup(0, (3,)))
    with pytest.raises(InconsistentFactError):
        store_with(Fact(ref("X", 3), bad), Fact(ref("X", 3), Claim.torsion_free()))
    with pytest.raises(InconsistentFactError):
        store_with(Fact(ref("X", 3), Claim.torsion_free()), Fact(ref("X", 3), bad))
    with pytest.raises(InconsistentFactError):
        store_with(
            Fact(ref("X", 3), bad),
            Fact(ref("X", 3), Claim.iso_to(FinAbGroup.zero())),
        )


def test_weaker_facts_never_retract_stronger_ones():
    store = store_with(
        Fact(ref("X", 3), Claim.torsion_free()),
        Fact(ref("X", 3), Claim.only_primes((5,))),
    )
    assert Fact(ref("X", 3), Claim.torsion_free()) in store
    assert Fact(ref("X", 3), Claim.only_primes((5,))) in store


def test_idempotent_re_add():
    store = store_with(Fact(ref("X", 1), Claim.torsion_free()))
    before = len(store)
    assert store.add(Fact(ref("X", 1), Claim.torsion_free()), ("axiom", "again")) == []
    assert len(store) == before


def test_torsion_equals_transports_both_ways():
    store = store_with(
        Fact(ref("X", 3), Claim.torsion_equals(ref("Y", 3))),
        Fact(ref("Y", 3), Claim.only_primes((2,))),
    )
    assert Fact(ref("X", 3), Claim.only_primes((2,))) in store
    store = store_with(
        Fact(ref("X", 3), Claim.torsion_free()),
        Fact(ref("Y", 3), Claim.torsion_equals(ref("X", 3))),
    )
    assert Fact(ref("Y", 3), Claim.torsion_free()) in store


def test_torsion_injection_transports_backwards_only():
    store = store_with(
        Fact(ref("X", 5), Claim.torsion_injects_into(ref("Y", 5))),
        Fact(ref("Y", 5), Claim.torsion_free()),
    )
    assert Fact(ref("X", 5), Claim.torsion_free()) in store
    store = store_with(
        Fact(ref("X", 5), Claim.torsion_injects_into(ref("Y", 5))),
        Fact(ref("X", 5), Claim.torsion_free()),
    )
    assert Fact(ref("Y", 5), Claim.torsion_free()) not in store


def test_undeclared_space_is_rejected():
    store = FactStore(SPACES)
    with pytest.raises(ParameterMismatchError):
        store.add(Fact(ref("Nowhere", 1), Claim.is_zero()), ("axiom", "a"))


# -------------------------------------------------------------------- rules


def step(rule, params, inputs=(), step_id="t1"):
    return Step(id=step_id, rule=rule, cite="test", params=params, inputs=tuple(inputs))


def test_transfer_cover_rule():
    total_tf = Fact(ref("X", 3), Claim.torsion_free())
    store = store_with(total_tf)
    out = apply_rule(
        store,
        step(
            "transfer_cover",
            {"cover_degree": 3, "total": "X", "base": "Y", "k": 3},
            [total_tf],
        ),
    )
    assert Fact(ref("Y", 3), Claim.only_primes((3,))) in out


def test_combine_primes_rule():
    facts = [
        Fact(ref("Y", 3), Claim.only_primes((3,))),
        Fact(ref("Y", 3), Claim.only_primes((2,))),
    ]
    store = store_with(*facts)
    out = apply_rule(
        store,
        step(
            "combine_primes",
            {"subject": ref("Y", 3).to_json_dict(), "first": [3], "second": [2]},
            facts,
        ),
    )
    assert Fact(ref("Y", 3), Claim.torsion_free()) in out


def test_thom_iso_rule():
    center_zero = Fact(ref("Z", 1), Claim.is_zero())
    center_iso = Fact(ref("Z", 0), Claim.iso_to(FinAbGroup.free(1)))
    store = store_with(center_zero, center_iso)
    out = apply_rule(
        store,
        step(
            "thom_iso",
            {"pair": "(X,Y)", "center": "Z", "copies": 81, "codim": 4,
             "degrees": [3, 4, 5]},
            [center_iso, center_zero],
        ),
    )
    assert Fact(ref("(X,Y)", 3), Claim.is_zero()) in out  # negative shift
    assert Fact(ref("(X,Y)", 4), Claim.iso_to(FinAbGroup.free(81))) in out
    assert Fact(ref("(X,Y)", 5), Claim.is_zero()) in out


def test_unknown_rule_and_missing_input():
    store = FactStore(SPACES)
    with pytest.raises(UnknownRuleError):
        apply_rule(store, step("majorize", {}))
    with pytest.raises(MissingInputError):
        apply_rule(
            store,
            step(
                "transfer_cover",
                {"cover_degree": 2, "total": "X", "base": "Y", "k": 3},
                [Fact(ref("X", 3), Claim.torsion_free())],
            ),
        )


def test_input_list_must_match_exactly():
    zero = Fact(ref("(X,Y)", 3), Claim.is_zero())
    tf = Fact(ref("(X,Y)", 4), Claim.torsion_free())
    extra = Fact(ref("Z", 0), Claim.torsion_free())
    store = store_with(zero, tf, extra)
    params = {
        "zero": ref("(X,Y)", 3).to_json_dict(),
        "left": ref("X", 3).to_json_dict(),
        "mid": ref("Y", 3).to_json_dict(),
        "right": ref("(X,Y)", 4).to_json_dict(),
    }
    out = apply_rule(store, step("les_torsion_equal", params, [zero, tf]))
    assert Fact(ref("X", 3), Claim.torsion_equals(ref("Y", 3))) in out
    with pytest.raises(ParameterMismatchError):
        apply_rule(store, step("les_torsion_equal", params, [zero, tf, extra]))
    with pytest.raises(ParameterMismatchError):
        apply_rule(store, step("les_torsion_equal", params, [zero]))


def test_apply_rule_is_pure_and_idempotent():
    total_tf = Fact(ref("X", 3), Claim.torsion_free())
    store = store_with(total_tf)
    the_step = step(
        "transfer_cover",
        {"cover_degree": 3, "total": "X", "base": "Y", "k": 3},
        [total_tf],
    )
    out1 = apply_rule(store, the_step)
    assert Fact(ref("Y", 3), Claim.only_primes((3,))) not in store
    out2 = apply_rule(out1, the_step)
    assert out1.facts_list() == out2.facts_list()


# ------------------------------------------------------------ whole scripts


def test_shipped_script_passes(shipped):
    report = check_script(shipped)
    assert report.passed
    assert report.grounded
    assert all(goal.established for goal in report.goals)
    assert [g.fact for g in report.goals] == [
        f"H^{k}(K2A) : torsion-free" for k in range(9)
    ]


def test_builder_matches_shipped_file(script, shipped):
    assert script_to_json_dict(script) == script_to_json_dict(shipped)


def test_report_replay_is_deterministic(shipped):
    first = check_script(shipped)
    second = check_script(shipped)
    assert json.dumps(first.to_json_dict()) == json.dumps(second.to_json_dict())
    assert first.to_text() == second.to_text()


def test_goal_chains_are_grounded_in_axioms(shipped):
    report = check_script(shipped)
    for goal in report.goals:
        assert goal.chain
        assert all("UNGROUNDED" not in line for line in goal.chain)
        assert any("axiom" in line for line in goal.chain)


def test_replay_produces_the_known_relative_groups(shipped):
    report = check_script(shipped)
    outputs = [line for s in report.steps for line in s.outputs]
    # Thom isomorphisms on the 81-point loci.
    assert "H^4(A,A_minus_A3) : iso(Z^81)" in outputs
    assert "H^4(Uprime,U) : iso(Z^81)" in outputs
    assert "H^5(Uprime,U) : is-zero" in outputs
    assert "H^6(A2tilde,Wtilde) : iso(Z^162)" in outputs


def test_empty_script_fails_its_goal():
    empty = Script(
        format=SCRIPT_FORMAT,
        spaces=(SpaceDecl("X"),),
        axioms=(),
        steps=(),
        goals=(Fact(ref("X", 3), Claim.torsion_free()),),
    )
    report = check_script(empty)
    assert not report.passed
    assert "goal not established" in report.first_failure


def test_deleting_totaro_axiom_breaks_the_transfer_step(script):
    report = check_script(without_axiom(script, "ax_totaro_hilb2"))
    assert not report.passed
    failed_rules = {s.rule for s in report.steps if not s.ok}
    assert "transfer_cover" in failed_rules


def test_deleting_a_leaf_fact_breaks_the_spectral_step(script):
    report = check_script(without_axiom(script, "cv_p1_q2"))
    assert not report.passed
    failed = {s.id for s in report.steps if not s.ok}
    assert "s01" in failed


def test_unknown_mutation_targets_raise(script):
    with pytest.raises(KeyError):
        without_axiom(script, "no_such_axiom")
    with pytest.raises(KeyError):
        without_step(script, "s99")


# ---------------------------------------------------------- script format


def test_parse_rejects_bad_format(shipped):
    d = script_to_json_dict(shipped)
    d["format"] = "kummer-proof/999"
    with pytest.raises(ScriptFormatError):
        parse_script(d)


def test_parse_rejects_undeclared_space(shipped):
    d = script_to_json_dict(shipped)
    d["goals"].append({"subject": {"space": "Mystery", "degree": 3},
                       "claim": {"kind": "torsion_free"}})
    with pytest.raises(ScriptFormatError):
        parse_script(d)


def test_parse_rejects_duplicate_ids(shipped):
    d = script_to_json_dict(shipped)
    d["axioms"].append(dict(d["axioms"][0]))
    with pytest.raises(ScriptFormatError):
        parse_script(d)


def test_script_roundtrip(shipped):
    assert script_to_json_dict(parse_script(script_to_json_dict(shipped))) == \
        script_to_json_dict(shipped)


# ------------------------------------------------------ computation axioms


def test_leaf_facts_structure(ctx):
    axioms = leaf_facts_from_computation(ctx)
    assert len(axioms) == 10
    ids = [a.id for a in axioms]
    assert "cv_p1_q4" in ids and "cfix_q5" in ids
    assert all(a.computation for a in axioms)
    tag = ctx.content_tag()
    assert all(tag in a.cite for a in axioms)


def test_leaf_facts_refuse_tampered_context(ctx):
    bad_entry = dataclasses.replace(
        ctx.vanishing[3], group=FinAbGroup(0, (3,))
    )
    tampered = dataclasses.replace(
        ctx, vanishing=ctx.vanishing[:3] + (bad_entry,) + ctx.vanishing[4:]
    )
    with pytest.raises(CertificateFailure):
        leaf_facts_from_computation(tampered)
