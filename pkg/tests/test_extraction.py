import itertools

import pytest
from hypothesis import given, settings

from lexanalogy.defgraph import (
    ConceptId,
    DefGraph,
    DefNode,
    EdgeKind,
    GraphEdge,
    NodeKind,
    parse_definition,
)
from lexanalogy.extraction import (
    Analogy,
    ExpansionCycleError,
    ExtractionConfig,
    ExtractionVerdicts,
    compare_graphs,
    expand_definition,
    extract_analogies,
    group_relations,
)
from lexanalogy.lexicon import ConceptEntry, FrequencyTable, Lexicon, Sense

from .strategies import definition_graphs


def cid(text: str) -> ConceptId:
    return ConceptId.parse(text)


# -- independent brute-force matcher (dual-route test oracle) -------------------


def oracle_single_diffs(g1: DefGraph, g2: DefGraph, unordered_args=False):
    """All (c1, c2) pairs witnessed by some correspondence with exactly one
    differing node pair; enumerates every label-preserving correspondence."""

    def correspondences(i, j):
        n1, n2 = g1.nodes[i], g2.nodes[j]
        if n1.kind is not n2.kind:
            return
        if n1.kind in (NodeKind.WORD, NodeKind.FUNCTION) and n1.label != n2.label:
            return
        group_options = []
        if n1.kind is NodeKind.FUNCTION:
            a1, a2 = g1.arg_targets(i), g2.arg_targets(j)
            if unordered_args:
                opts = group_correspondences(a1, a2)
                if not opts:
                    return
                group_options.append(opts)
            else:
                if len(a1) != len(a2):
                    return
                for u, v in zip(a1, a2):
                    opts = list(correspondences(u, v))
                    if not opts:
                        return
                    group_options.append(opts)
        by1: dict = {}
        for e in g1.attribute_edges(i):
            by1.setdefault(e.label, []).append(e.target)
        by2: dict = {}
        for e in g2.attribute_edges(j):
            by2.setdefault(e.label, []).append(e.target)
        if set(by1) != set(by2):
            return
        for label in sorted(by1):
            opts = group_correspondences(by1[label], by2[label])
            if not opts:
                return
            group_options.append(opts)
        for combo in itertools.product(*group_options):
            yield [(i, j)] + [pair for part in combo for pair in part]

    def group_correspondences(children1, children2):
        if len(children1) != len(children2):
            return []
        out = []
        for perm in itertools.permutations(range(len(children2))):
            options = []
            for k, pk in enumerate(perm):
                opts = list(correspondences(children1[k], children2[pk]))
                if not opts:
                    break
                options.append(opts)
            else:
                for combo in itertools.product(*options):
                    out.append([pair for part in combo for pair in part])
        return out

    found = set()
    for corr in correspondences(g1.root, g2.root):
        diffs = {
            (g1.nodes[i].concept, g2.nodes[j].concept)
            for i, j in corr
            if g1.nodes[i].kind is NodeKind.CONCEPT
            and g1.nodes[i].concept != g2.nodes[j].concept
        }
        if len(diffs) == 1:
            found.add(next(iter(diffs)))
    return found


def assert_agrees_with_oracle(g1, g2, unordered_args=False):
    result = compare_graphs(g1, g2, unordered_args=unordered_args)
    expected = oracle_single_diffs(g1, g2, unordered_args=unordered_args)
    if not expected:
        assert result is None, (g1, g2, result)
    else:
        assert result in expected, (g1, g2, result, expected)


# -- expansion -----------------------------------------------------------------


class TestExpand:
    def test_trivial_definition_is_replaced(self, timber_steed):
        lex, _, _ = timber_steed
        sense = lex.words["駿馬"][1]
        expanded = expand_definition(sense, lex)
        assert expanded == parse_definition("{馬|horse:qualification={HighQuality|優質}}")

    def test_multi_node_definition_unchanged(self, sample_lexicon):
        sense = sample_lexicon.words["實驗室"][1]
        assert expand_definition(sense, sample_lexicon) is sense.definition

    def test_concept_without_definition_stops(self, sample_lexicon):
        sense = sample_lexicon.words["協"][1]  # help|幫助 has no definition
        assert expand_definition(sense, sample_lexicon) == parse_definition("{help|幫助}")

    def test_two_concept_cycle_detected(self):
        lex = Lexicon()
        lex.add_concept(ConceptEntry(cid("A|甲"), parse_definition("{B|乙}")))
        lex.add_concept(ConceptEntry(cid("B|乙"), parse_definition("{A|甲}")))
        lex.add_sense(Sense("字", 1, parse_definition("{A|甲}")))
        with pytest.raises(ExpansionCycleError) as info:
            expand_definition(lex.words["字"][1], lex)
        assert cid("A|甲") in info.value.cycle
        assert cid("B|乙") in info.value.cycle

    def test_self_cycle_detected(self):
        lex = Lexicon()
        lex.add_concept(ConceptEntry(cid("A|甲"), parse_definition("{A|甲}")))
        lex.add_sense(Sense("字", 1, parse_definition("{A|甲}")))
        with pytest.raises(ExpansionCycleError):
            expand_definition(lex.words["字"][1], lex)

    def test_limit_stops_expansion(self):
        lex = Lexicon()
        for i in range(6):
            lex.add_concept(
                ConceptEntry(cid(f"C{'x' * i}|概{i}"), parse_definition(f"{{C{'x' * (i + 1)}|概{i + 1}}}"))
            )
        lex.add_sense(Sense("字", 1, parse_definition("{C|概0}")))
        expanded = expand_definition(lex.words["字"][1], lex, limit=3)
        assert expanded == parse_definition("{Cxxx|概3}")

    def test_bad_limit_rejected(self, timber_steed):
        lex, _, _ = timber_steed
        with pytest.raises(ValueError):
            expand_definition(lex.words["駿馬"][1], lex, limit=0)


# -- graph comparison ------------------------------------------------------------


TIMBER = "{wood|木:qualification={HighQuality|優質}}"
STEED = "{馬|horse:qualification={HighQuality|優質}}"
LAB = (
    "{InstitutePlace|場所:telic={or({experiment|實驗:location={~}},"
    "{research|研究:location={~}})}}"
)
KIN = "{male|男性:kinship={mother|母:predication={BearChild|生育}},theme={協}}"


class TestCompareGraphs:
    def test_timber_steed_single_difference(self):
        result = compare_graphs(parse_definition(TIMBER), parse_definition(STEED))
        assert result == (cid("wood|木"), cid("馬|horse"))

    def test_identical_graphs_give_none(self):
        g = parse_definition(LAB)
        assert compare_graphs(g, g) is None

    def test_two_differences_give_none(self):
        g1 = parse_definition("{wood|木:qualification={HighQuality|優質}}")
        g2 = parse_definition("{馬|horse:qualification={LowQuality|劣質}}")
        assert compare_graphs(g1, g2) is None

    def test_edge_label_difference_gives_none(self):
        g1 = parse_definition("{wood|木:qualification={HighQuality|優質}}")
        g2 = parse_definition("{wood|木:telic={HighQuality|優質}}")
        assert compare_graphs(g1, g2) is None

    def test_shape_difference_gives_none(self):
        g1 = parse_definition("{wood|木}")
        g2 = parse_definition(TIMBER)
        assert compare_graphs(g1, g2) is None

    def test_word_leaf_difference_gives_none(self):
        g1 = parse_definition("{human|人:theme={協}}")
        g2 = parse_definition("{human|人:theme={馬}}")
        assert compare_graphs(g1, g2) is None

    def test_function_name_difference_gives_none(self):
        g1 = parse_definition("{a|甲:telic={or({b|乙},{c|丙})}}")
        g2 = parse_definition("{a|甲:telic={and({b|乙},{c|丙})}}")
        assert compare_graphs(g1, g2) is None

    def test_arg_order_matters_by_default(self):
        g1 = parse_definition("{a|甲:telic={or({b|乙},{c|丙})}}")
        g2 = parse_definition("{a|甲:telic={or({c|丙},{b|乙})}}")
        # Ordered: two positional diffs; unordered: a perfect match.
        assert compare_graphs(g1, g2) is None
        assert compare_graphs(g1, g2, unordered_args=True) is None
        g3 = parse_definition("{a|甲:telic={or({c|丙},{d|丁})}}")
        assert compare_graphs(g1, g3) is None
        assert compare_graphs(g1, g3, unordered_args=True) == (cid("b|乙"), cid("d|丁"))

    def test_repeated_label_set_matching(self):
        g1 = parse_definition("{a|甲:theme={b|乙},theme={c|丙}}")
        g2 = parse_definition("{a|甲:theme={c|丙},theme={d|丁}}")
        assert compare_graphs(g1, g2) == (cid("b|乙"), cid("d|丁"))

    def test_deep_difference(self):
        g1 = parse_definition(KIN)
        g2 = parse_definition(KIN.replace("mother|母", "father|父"))
        assert compare_graphs(g1, g2) == (cid("mother|母"), cid("father|父"))

    def test_concept_half_order_is_irrelevant(self):
        g1 = parse_definition("{wood|木:qualification={優質|HighQuality}}")
        g2 = parse_definition(STEED)
        assert compare_graphs(g1, g2) == (cid("wood|木"), cid("馬|horse"))


def _node_label_edits(graph: DefGraph):
    """Perturbed copies of ``graph``: one node label changed."""
    spare_concepts = [cid("spareA|備甲"), cid("spareB|備乙")]
    for i, node in enumerate(graph.nodes):
        if node.kind is NodeKind.CONCEPT:
            for spare in spare_concepts:
                nodes = list(graph.nodes)
                nodes[i] = DefNode(NodeKind.CONCEPT, concept=spare)
                yield DefGraph(nodes, graph.edges, graph.root)
        elif node.kind is NodeKind.WORD:
            nodes = list(graph.nodes)
            nodes[i] = DefNode(NodeKind.WORD, label="備")
            yield DefGraph(nodes, graph.edges, graph.root)
        elif node.kind is NodeKind.FUNCTION:
            nodes = list(graph.nodes)
            nodes[i] = DefNode(NodeKind.FUNCTION, label="nor")
            yield DefGraph(nodes, graph.edges, graph.root)


def _edge_label_edits(graph: DefGraph):
    """Perturbed copies of ``graph``: one attribute label changed."""
    for k, edge in enumerate(graph.edges):
        if edge.kind is EdgeKind.ATTRIBUTE:
            edges = list(graph.edges)
            edges[k] = GraphEdge(edge.source, edge.target, EdgeKind.ATTRIBUTE, label="spare")
            yield DefGraph(graph.nodes, edges, graph.root)


def _all_edits(graph: DefGraph):
    yield from _node_label_edits(graph)
    yield from _edge_label_edits(graph)


def perturbation_suite():
    for text in (TIMBER, LAB, KIN):
        base = parse_definition(text)
        singles = list(_all_edits(base))
        yield base, singles


def test_exhaustive_perturbation_suite_matches_oracle():
    checked = 0
    for base, singles in perturbation_suite():
        for edited in singles:
            assert_agrees_with_oracle(base, edited)
            assert_agrees_with_oracle(edited, base)
            checked += 2
        for edited in singles:
            for twice in _all_edits(edited):
                assert_agrees_with_oracle(base, twice)
                checked += 1
    assert checked > 100


@settings(max_examples=100, deadline=None)
@given(definition_graphs(depth=2), definition_graphs(depth=2))
def test_compare_agrees_with_oracle_on_random_pairs(g1, g2):
    assert_agrees_with_oracle(g1, g2)


@settings(max_examples=100, deadline=None)
@given(definition_graphs(depth=2), definition_graphs(depth=2))
def test_compare_is_symmetric(g1, g2):
    fwd = compare_graphs(g1, g2)
    bwd = compare_graphs(g2, g1)
    if fwd is None:
        assert bwd is None
    else:
        assert bwd == (fwd[1], fwd[0])


# -- the extraction pipeline ------------------------------------------------------


class TestExtract:
    def test_timber_steed_end_to_end(self, timber_steed):
        lex, tax, freq = timber_steed
        result = extract_analogies(lex, tax, freq)
        assert result.analogies == [
            Analogy("良材", "木頭", "駿馬", ("山馬", "馬", "馬匹", "駙"))
        ]
        assert [ca.key for ca in result.concept_analogies] == [
            ("良材", 2, "wood|木", "駿馬", 1, "horse|馬")
        ]
        assert result.report.final == 1

    def test_kinship_end_to_end(self, kinship):
        lex, tax, freq = kinship
        result = extract_analogies(lex, tax, freq)
        assert result.analogies == [
            Analogy(
                "外公",
                "母親",
                "祖父",
                ("父", "父親", "爸", "爸爸", "爹", "爹爹", "老子"),
            )
        ]

    def test_empty_lexicon(self):
        result = extract_analogies(
            Lexicon(),
            None,
            FrequencyTable({}),
            ExtractionConfig(concrete_root=None, min_freq=0),
        )
        assert result.analogies == []
        assert result.report.sense_pairs == 0

    def test_uncommon_left_expansion_word_kills_the_analogy(self, timber_steed):
        lex, tax, _ = timber_steed
        counts = {
            "良材": 12, "木頭": 4, "駿馬": 8,
            "山馬": 6, "馬": 1000, "馬匹": 40, "駙": 5,
        }
        result = extract_analogies(lex, tax, FrequencyTable(counts))
        assert result.analogies == []

    def test_min_freq_monotonicity(self, timber_steed):
        lex, tax, freq = timber_steed
        loose = extract_analogies(lex, tax, freq, ExtractionConfig(min_freq=5))
        tight = extract_analogies(lex, tax, freq, ExtractionConfig(min_freq=10))
        loose_questions = {(a.w1, a.w2, a.w3): set(a.synset) for a in loose.analogies}
        for a in tight.analogies:
            assert (a.w1, a.w2, a.w3) in loose_questions
            assert set(a.synset) <= loose_questions[(a.w1, a.w2, a.w3)]

    def test_concrete_root_filters(self, timber_steed):
        lex, tax, freq = timber_steed
        # Rooting the filter at the event branch excludes everything.
        config = ExtractionConfig(concrete_root=cid("event|事件"))
        assert extract_analogies(lex, tax, freq, config).analogies == []

    def test_no_taxonomy_requires_disabled_filter(self, timber_steed):
        lex, _, freq = timber_steed
        with pytest.raises(ValueError):
            extract_analogies(lex, None, freq)
        result = extract_analogies(
            lex, None, freq, ExtractionConfig(concrete_root=None)
        )
        assert len(result.analogies) == 1

    def test_rejected_concept_analogy_dropped(self, timber_steed):
        lex, tax, freq = timber_steed
        key = ("良材", 2, "wood|木", "駿馬", 1, "horse|馬")
        verdicts = ExtractionVerdicts(rejected={key})
        result = extract_analogies(lex, tax, freq, verdicts=verdicts)
        assert result.analogies == []
        assert result.report.post_verdict == 0
        # The concept analogy is still listed for annotation purposes.
        assert len(result.concept_analogies) == 1

    def test_strict_mode_drops_unlabeled(self, timber_steed):
        lex, tax, freq = timber_steed
        verdicts = ExtractionVerdicts(approved=set())
        assert extract_analogies(lex, tax, freq, verdicts=verdicts).analogies == []

    def test_synset_removal_prunes_answers(self, timber_steed):
        lex, tax, freq = timber_steed
        verdicts = ExtractionVerdicts(
            synset_removals={cid("馬|horse").key: {"山馬", "駙"}}
        )
        result = extract_analogies(lex, tax, freq, verdicts=verdicts)
        assert result.analogies == [Analogy("良材", "木頭", "駿馬", ("馬", "馬匹"))]

    def test_expansion_cycle_is_skipped_not_fatal(self, timber_steed):
        lex, tax, freq = timber_steed
        lex.add_concept(ConceptEntry(cid("loopA|迴甲"), parse_definition("{loopB|迴乙}")))
        lex.add_concept(ConceptEntry(cid("loopB|迴乙"), parse_definition("{loopA|迴甲}")))
        lex.add_sense(Sense("迴", 1, parse_definition("{loopA|迴甲}")))
        freq.counts["迴"] = 99
        try:
            result = extract_analogies(lex, tax, freq)
            assert len(result.analogies) == 1
            assert any("迴" in what for what, _ in result.report.skipped)
        finally:
            del lex.words["迴"]
            del lex.concepts[cid("loopA|迴甲")]
            del lex.concepts[cid("loopB|迴乙")]
            del freq.counts["迴"]

    def test_deterministic_across_runs_and_jobs(self, timber_steed, kinship):
        for lex, tax, freq in (timber_steed, kinship):
            one = extract_analogies(lex, tax, freq)
            two = extract_analogies(lex, tax, freq)
            four = extract_analogies(lex, tax, freq, jobs=4)
            assert one.analogies == two.analogies == four.analogies
            assert one.report.sense_pairs == four.report.sense_pairs

    def test_emitted_analogies_pass_all_filters(self, timber_steed, kinship):
        for lex, tax, freq in (timber_steed, kinship):
            config = ExtractionConfig()
            result = extract_analogies(lex, tax, freq, config)
            for a in result.analogies:
                for word in (a.w1, a.w2, a.w3, *a.synset):
                    assert freq.is_common(word, config.min_freq)
                ca = next(
                    c
                    for c in result.concept_analogies
                    if c.left_word == a.w1 and c.right_word == a.w3
                )
                assert tax.is_under(ca.left_concept, config.concrete_root)
                assert tax.is_under(ca.right_concept, config.concrete_root)
                assert a.w2 in lex.synset_of(ca.left_concept)
                assert set(a.synset) <= set(lex.synset_of(ca.right_concept))


# -- relation grouping -------------------------------------------------------------


def closure_classes(analogies):
    """Brute-force transitive closure over analogy-linked pairs."""
    pairs = set()
    links = []
    for a in analogies:
        base = (a.w1, a.w2)
        pairs.add(base)
        for s in a.synset:
            other = (a.w3, s)
            pairs.add(other)
            links.append((base, other))
    classes = [{p} for p in sorted(pairs)]
    changed = True
    while changed:
        changed = False
        for x, y in links:
            cx = next(c for c in classes if x in c)
            cy = next(c for c in classes if y in c)
            if cx is not cy:
                classes.remove(cy)
                cx |= cy
                changed = True
    return sorted(tuple(sorted(c)) for c in classes)


class TestGroupRelations:
    def test_juvenile_adult_chain(self):
        analogies = [
            Analogy("樹苗", "樹", "蝌蚪", ("青蛙",)),
            Analogy("蝌蚪", "青蛙", "孑孓", ("蚊",)),
        ]
        classes = group_relations(analogies)
        assert len(classes) == 1
        assert set(classes[0].pairs) == {("樹苗", "樹"), ("蝌蚪", "青蛙"), ("孑孓", "蚊")}

    def test_disjoint_analogies_make_two_classes(self):
        analogies = [
            Analogy("a1", "b1", "c1", ("d1",)),
            Analogy("a2", "b2", "c2", ("d2",)),
        ]
        assert len(group_relations(analogies)) == 2

    @pytest.mark.parametrize("k", range(1, 9))
    def test_chain_of_k_makes_one_class(self, k):
        analogies = [
            Analogy(f"w{i}", f"x{i}", f"w{i + 1}", (f"x{i + 1}",)) for i in range(k)
        ]
        classes = group_relations(analogies)
        assert len(classes) == 1
        assert len(classes[0].pairs) == k + 1
        assert [set(c) for c in closure_classes(analogies)] == [set(classes[0].pairs)]

    def test_agrees_with_closure_oracle_on_random_inputs(self):
        import random

        rng = random.Random(7)
        words = [f"w{i}" for i in range(12)]
        for _ in range(25):
            analogies = []
            for _ in range(rng.randint(1, 10)):
                w1, w2, w3 = rng.sample(words, 3)
                synset = tuple(sorted(rng.sample(words, rng.randint(1, 3))))
                if w3 in (w1, w2) or w1 == w2:
                    continue
                analogies.append(Analogy(w1, w2, w3, synset))
            got = sorted(tuple(sorted(c.pairs)) for c in group_relations(analogies))
            assert got == closure_classes(analogies)

    def test_synset_members_all_link(self):
        a = Analogy("a", "b", "c", ("x", "y", "z"))
        classes = group_relations([a])
        assert len(classes) == 1
        assert len(classes[0].pairs) == 4
