import pytest
from hypothesis import given
from hypothesis import strategies as st

from ethics_triage.corpus import Document
from ethics_triage.errors import ValidationError
from ethics_triage.screening import (
    KeywordRules,
    ScreenFlags,
    ScreenSummary,
    combine_flags,
    keyword_screen,
    screen_document,
)


def make_doc(doc_id, body="", gray=False):
    return Document(id=doc_id, title="", abstract="", body_text=body, gray_flag=gray)


class TestKeywordScreen:
    def test_irb_exact_match(self):
        mention, matched = keyword_screen("We obtained IRB approval")
        assert mention is True
        assert matched == (("IRB", 1),)

    def test_no_keywords(self):
        mention, matched = keyword_screen("We measured TCP throughput")
        assert mention is False
        assert matched == ()

    def test_morale_is_a_documented_false_positive(self):
        mention, matched = keyword_screen("Team morale was high; ethical review followed")
        assert mention is True
        assert matched == (("morale", 1), ("ethical", 1))

    def test_prefixes_case_insensitive(self):
        mention, matched = keyword_screen("Ethics and ETHICAL and ethics")
        assert mention is True
        assert matched == (("Ethics", 1), ("ETHICAL", 1), ("ethics", 1))

    def test_exact_tokens_case_sensitive(self):
        mention, matched = keyword_screen("the irb and reb acronyms in lowercase")
        assert mention is False
        assert matched == ()

    def test_exact_tokens_whole_word(self):
        # IRB inside a longer word does not match; punctuation is a boundary.
        assert keyword_screen("stIRBed awake")[0] is False
        assert keyword_screen("approved (IRB #42)")[0] is True

    def test_counts_per_surface_form(self):
        _, matched = keyword_screen("moral moral Moral REB REB")
        assert matched == (("moral", 2), ("Moral", 1), ("REB", 2))

    def test_rules_invariants(self):
        with pytest.raises(ValidationError):
            KeywordRules(prefix_patterns=("Ethic",))
        with pytest.raises(ValidationError):
            KeywordRules(exact_tokens=("",))

    @given(st.text(), st.text())
    def test_concatenation_with_boundary(self, a, b):
        joined = keyword_screen(a + " " + b)[0]
        assert joined == (keyword_screen(a)[0] or keyword_screen(b)[0])

    def test_screen_document_passes_gray_through(self):
        doc = make_doc("d1", body="No REB consulted", gray=True)
        flags = screen_document(doc)
        assert flags == ScreenFlags(
            doc_id="d1", gray=True, ethics_mention=True, matched_terms=(("REB", 1),)
        )

    def test_screen_flags_invariant(self):
        with pytest.raises(ValidationError):
            ScreenFlags(doc_id="d", gray=False, ethics_mention=True, matched_terms=())


class TestCombineFlags:
    def corpus(self, n):
        return [make_doc(f"d{i}") for i in range(n)]

    def test_published_counts_arithmetic(self):
        # 234 gray, 200 ethics-mentioning, 49 in both -> union 385.
        corpus = self.corpus(400)
        both = {f"d{i}" for i in range(49)}
        gray = both | {f"d{i}" for i in range(49, 234)}
        ethics = both | {f"d{i}" for i in range(234, 385)}
        summary = combine_flags(gray, ethics, corpus)
        assert summary.gray_count == 234
        assert summary.ethics_count == 200
        assert summary.intersection_count == 49
        assert summary.union_count == 385

    def test_disjoint_sets(self):
        summary = combine_flags({"d0", "d1"}, {"d2", "d3", "d4"}, self.corpus(6))
        assert summary.union_count == 5
        assert summary.intersection_count == 0

    def test_identical_sets(self):
        summary = combine_flags({"d0", "d1"}, {"d0", "d1"}, self.corpus(3))
        assert summary.union_count == summary.intersection_count == 2

    def test_unknown_id_rejected(self):
        with pytest.raises(ValidationError, match="ghost"):
            combine_flags({"ghost"}, set(), self.corpus(2))

    def test_table_covers_every_document_in_corpus_order(self):
        summary = combine_flags({"d2"}, {"d0", "d2"}, self.corpus(4))
        assert summary.table == (
            ("d0", False, True),
            ("d1", False, False),
            ("d2", True, True),
            ("d3", False, False),
        )

    @given(
        st.sets(st.integers(min_value=0, max_value=30)),
        st.sets(st.integers(min_value=0, max_value=30)),
    )
    def test_inclusion_exclusion_always_holds(self, gray, ethics):
        corpus = self.corpus(31)
        summary = combine_flags(
            {f"d{i}" for i in gray}, {f"d{i}" for i in ethics}, corpus
        )
        assert (
            summary.union_count
            == summary.gray_count + summary.ethics_count - summary.intersection_count
        )

    def test_summary_invariants_enforced(self):
        with pytest.raises(ValidationError):
            ScreenSummary(gray_count=2, ethics_count=2, intersection_count=1, union_count=4)
        with pytest.raises(ValidationError):
            ScreenSummary(gray_count=1, ethics_count=1, intersection_count=2, union_count=0)
