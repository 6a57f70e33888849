import pytest

from lexanalogy.defgraph import ConceptId, parse_definition
from lexanalogy.lexicon import (
    FrequencyTable,
    Lexicon,
    LexiconError,
    Sense,
    Taxonomy,
    TaxonomyError,
)


def cid(text: str) -> ConceptId:
    return ConceptId.parse(text)


class TestLexiconLoad:
    def test_sample_lexicon_contents(self, sample_lexicon):
        lex = sample_lexicon
        assert lex.attributes == {"telic"}
        assert sorted(lex.words) == ["協", "實驗室"]
        assert [s.sense_index for s in lex.senses_of("協")] == [1, 2]
        assert lex.senses_of("協")[0].definition == parse_definition("{help|幫助}")
        assert lex.senses_of("協")[0].gloss == "help"
        assert cid("駿馬|ExcellentSteed") in lex.concepts
        entry = lex.concept(cid("駿馬|ExcellentSteed"))
        assert entry.definition == parse_definition(
            "{馬|horse:qualification={HighQuality|優質}}"
        )
        assert len(lex.senses_of("實驗室")) == 1

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.tsv"
        path.write_text("", encoding="utf-8")
        lex = Lexicon.load(path)
        assert not lex.words and not lex.concepts and not lex.attributes

    def test_wrong_column_count_reports_line(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("telic\tattribute\t\t\t\n協\tword\t1\n", encoding="utf-8")
        with pytest.raises(LexiconError) as info:
            Lexicon.load(path)
        assert info.value.line == 2

    def test_bad_definition_reports_line_and_offset(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("協\tword\t1\t{help|幫助\t\n", encoding="utf-8")
        with pytest.raises(LexiconError) as info:
            Lexicon.load(path)
        assert info.value.line == 1
        assert "byte offset" in str(info.value)

    def test_duplicate_sense_rejected(self, tmp_path):
        path = tmp_path / "dup.tsv"
        rows = ["協\tword\t1\t{help|幫助}\t", "協\tword\t1\t{community|團體}\t"]
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        with pytest.raises(LexiconError) as info:
            Lexicon.load(path)
        assert info.value.line == 2

    def test_kind_token_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("telic\tword\t1\t{help|幫助}\t\n", encoding="utf-8")
        with pytest.raises(LexiconError):
            Lexicon.load(path)

    def test_nonpositive_sense_index_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("協\tword\t0\t{help|幫助}\t\n", encoding="utf-8")
        with pytest.raises(LexiconError):
            Lexicon.load(path)

    def test_save_load_round_trip(self, sample_lexicon, timber_steed, kinship, tmp_path):
        for i, lex in enumerate([sample_lexicon, timber_steed[0], kinship[0]]):
            out = tmp_path / f"again{i}.tsv"
            lex.save(out)
            again = Lexicon.load(out)
            assert again.attributes == lex.attributes
            assert again.concepts == lex.concepts
            assert again.words == lex.words
            # And the re-serialization is stable byte for byte.
            out2 = tmp_path / f"thrice{i}.tsv"
            again.save(out2)
            assert out.read_bytes() == out2.read_bytes()


class TestSynsets:
    def test_horse_synset(self, timber_steed):
        lex, _, _ = timber_steed
        assert lex.synset_of(cid("馬|horse")) == ["山馬", "馬", "馬匹", "駙"]

    def test_wood_synset(self, timber_steed):
        lex, _, _ = timber_steed
        assert lex.synset_of(cid("wood|木")) == ["木頭"]

    def test_unknown_concept_empty(self, timber_steed):
        lex, _, _ = timber_steed
        assert lex.synset_of(cid("nothing|烏有")) == []

    def test_non_trivial_senses_do_not_attach(self, timber_steed):
        # 良材#2 mentions wood|木 inside a larger graph: not a trivial sense.
        lex, _, _ = timber_steed
        assert "良材" not in lex.synset_of(cid("wood|木"))

    def test_agrees_with_brute_force_scan(self, timber_steed, kinship):
        for lex in (timber_steed[0], kinship[0]):
            concepts = set(lex.concepts)
            for senses in lex.words.values():
                for sense in senses.values():
                    g = sense.definition
                    for node in g.nodes:
                        if node.concept is not None:
                            concepts.add(node.concept)
            for concept in concepts:
                brute = sorted(
                    {
                        s.word
                        for senses in lex.words.values()
                        for s in senses.values()
                        if s.definition.n_nodes == 1
                        and s.definition.nodes[0].concept == concept
                    }
                )
                assert lex.synset_of(concept) == brute


class TestTaxonomy:
    def test_is_under_physical(self, timber_steed):
        _, tax, _ = timber_steed
        assert tax.is_under(cid("馬|horse"), cid("physical|物質"))
        assert tax.is_under(cid("wood|木"), cid("physical|物質"))

    def test_abstract_branch_not_under_physical(self, timber_steed):
        _, tax, _ = timber_steed
        assert not tax.is_under(cid("ride|騎"), cid("physical|物質"))
        assert not tax.is_under(cid("talent|人才"), cid("physical|物質"))

    def test_reflexive(self, timber_steed):
        _, tax, _ = timber_steed
        c = cid("馬|horse")
        assert tax.is_under(c, c)

    def test_unknown_concept_is_error(self, timber_steed):
        _, tax, _ = timber_steed
        with pytest.raises(TaxonomyError):
            tax.is_under(cid("nothing|烏有"), cid("physical|物質"))
        with pytest.raises(TaxonomyError):
            tax.is_under(cid("馬|horse"), cid("nothing|烏有"))

    def test_partial_order(self, timber_steed):
        _, tax, _ = timber_steed
        concepts = list(tax.parent)
        for a in concepts:
            for b in concepts:
                if tax.is_under(a, b) and tax.is_under(b, a):
                    assert a == b  # antisymmetry
                if tax.is_under(a, b):
                    for c in concepts:
                        if tax.is_under(b, c):
                            assert tax.is_under(a, c)  # transitivity

    def test_two_roots_rejected(self):
        with pytest.raises(TaxonomyError):
            Taxonomy({cid("a|甲"): None, cid("b|乙"): None})

    def test_cycle_rejected(self):
        with pytest.raises(TaxonomyError):
            Taxonomy(
                {
                    cid("r|根"): None,
                    cid("a|甲"): cid("b|乙"),
                    cid("b|乙"): cid("a|甲"),
                }
            )

    def test_save_load_round_trip(self, timber_steed, tmp_path):
        _, tax, _ = timber_steed
        out = tmp_path / "tax.tsv"
        tax.save(out)
        again = Taxonomy.load(out)
        assert again.parent == tax.parent
        assert again.root == tax.root

    def test_implicit_root_row(self, tmp_path):
        path = tmp_path / "tax.tsv"
        path.write_text("a|甲\tr|根\nb|乙\tr|根\n", encoding="utf-8")
        tax = Taxonomy.load(path)
        assert tax.root == cid("r|根")


class TestFrequencies:
    def test_at_threshold_is_common(self):
        freq = FrequencyTable({"木頭": 5})
        assert freq.is_common("木頭", 5)

    def test_below_threshold(self):
        freq = FrequencyTable({"木頭": 4})
        assert not freq.is_common("木頭", 5)

    def test_absent_word_counts_zero(self):
        freq = FrequencyTable({})
        assert freq.count("木頭") == 0
        assert not freq.is_common("木頭", 5)

    def test_threshold_zero_always_common(self):
        assert FrequencyTable({}).is_common("任何", 0)

    def test_negative_threshold_rejected(self):
        with pytest.raises(ValueError):
            FrequencyTable({}).is_common("木頭", -1)

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            FrequencyTable({"木頭": -3})

    def test_save_load_round_trip(self, tmp_path):
        freq = FrequencyTable({"木頭": 30, "馬": 1000})
        out = tmp_path / "freq.tsv"
        freq.save(out)
        assert FrequencyTable.load(out).counts == freq.counts


def test_programmatic_lexicon_building():
    lex = Lexicon()
    lex.add_sense(Sense("木頭", 1, parse_definition("{wood|木}")))
    with pytest.raises(ValueError):
        lex.add_sense(Sense("木頭", 1, parse_definition("{wood|木}")))
    assert lex.synset_of(cid("wood|木")) == ["木頭"]
