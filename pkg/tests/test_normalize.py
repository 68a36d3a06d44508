from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontoscaffold.mining import CandidateSet
from ontoscaffold.normalize import (
    RawTriple,
    Rejection,
    ValidatedTriple,
    normalize_term,
    predicate_head_lemma,
    validate_triple,
)


def test_normalize_examples():
    assert normalize_term("The Public Interest") == "public interest"
    assert normalize_term("software engineers") == "software engineer"
    assert normalize_term("  well-founded   belief ") == "well-founded belief"


def test_normalize_strips_quotes_and_determiners():
    assert normalize_term('"the ethical approach"') == "ethical approach"
    assert normalize_term("An Analysis") == "analysis"
    assert normalize_term("these Ethics Standards") == "ethics standard"


def test_normalize_final_token_only():
    # modifiers keep their plural form; only the head is singularized
    assert normalize_term("ethics standards") == "ethics standard"
    assert normalize_term("systems engineers") == "systems engineer"


def test_normalize_irregulars():
    assert normalize_term("criteria") == "criterion"
    assert normalize_term("analyses") == "analysis"
    assert normalize_term("software") == "software"
    assert normalize_term("processes") == "process"


@settings(max_examples=2000, deadline=None)
@given(st.text(max_size=60))
def test_normalize_idempotent(s):
    once = normalize_term(s)
    assert normalize_term(once) == once


@settings(max_examples=500, deadline=None)
@given(st.text(max_size=60))
def test_normalize_trimmed_and_lowercase(s):
    out = normalize_term(s)
    assert out == out.strip()
    assert out == out.casefold()


# -- predicate head ----------------------------------------------------------

@pytest.mark.parametrize(
    "predicate,expected",
    [
        ("must document", "document"),
        ("shall act consistently with", "act"),
        ("shall be fair to", "be"),
        ("are ensured for", "ensure"),
        ("is", "be"),
        ("meets", "meet"),
    ],
)
def test_predicate_head_lemma(predicate, expected):
    assert predicate_head_lemma(predicate) == expected


# -- validate_triple ---------------------------------------------------------

def _candidates(terms, verbs):
    return CandidateSet("d:p0:s0", terms=list(terms), verbs=list(verbs))


def test_exact_match_after_normalization():
    result = validate_triple(
        RawTriple("The software engineer", "shall act", "the public interest"),
        _candidates(["software engineers", "public interest"], ["act"]),
    )
    assert isinstance(result, ValidatedTriple)
    assert result.subject == "software engineer"
    assert result.object == "public interest"
    assert result.flags == set()


def test_ambiguous_containment_rejected():
    result = validate_triple(
        RawTriple("engineer", "acts", "public interest"),
        _candidates(["software engineer", "test engineer", "public interest"], ["act"]),
    )
    assert isinstance(result, Rejection)
    assert "ambiguous" in result.reason


def test_unique_containment_repairs():
    result = validate_triple(
        RawTriple("managers", "promote", "the ethical approach"),
        _candidates(["software engineering managers", "ethical approach"], ["promote"]),
    )
    assert isinstance(result, ValidatedTriple)
    assert result.subject == "software engineering manager"
    assert "subject_repaired" in result.flags


def test_predicate_head_match_unflagged():
    result = validate_triple(
        RawTriple("engineer", "must document", "defect"),
        _candidates(["engineer", "defect"], ["document"]),
    )
    assert isinstance(result, ValidatedTriple)
    assert "predicate_outside_vocab" not in result.flags


def test_predicate_outside_vocab_lenient_vs_strict():
    raw = RawTriple("engineer", "requires", "defect")
    candidates = _candidates(["engineer", "defect"], ["act"])
    lenient = validate_triple(raw, candidates, policy="lenient")
    assert isinstance(lenient, ValidatedTriple)
    assert "predicate_outside_vocab" in lenient.flags
    strict = validate_triple(raw, candidates, policy="strict")
    assert isinstance(strict, Rejection)


def test_no_match_rejected():
    result = validate_triple(
        RawTriple("company", "acts", "profit"),
        _candidates(["software engineer"], ["act"]),
    )
    assert isinstance(result, Rejection)
    assert result.reason.startswith("subject")


def test_unknown_policy_rejected():
    with pytest.raises(ValueError):
        validate_triple(
            RawTriple("a", "b", "c"), _candidates(["a"], []), policy="sloppy"
        )


@settings(max_examples=300, deadline=None)
@given(
    subject=st.text(min_size=1, max_size=20),
    obj=st.text(min_size=1, max_size=20),
    terms=st.lists(st.text(min_size=1, max_size=20), min_size=1, max_size=6),
)
def test_strict_mode_stays_inside_candidates(subject, obj, terms):
    candidates = _candidates(terms, ["act"])
    normalized = {normalize_term(t) for t in terms}
    result = validate_triple(
        RawTriple(subject, "shall act", obj), candidates, policy="strict"
    )
    if isinstance(result, ValidatedTriple):
        assert result.subject in normalized
        assert result.object in normalized
