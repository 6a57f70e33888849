"""The five-step analogy extraction, on the good-timber/excellent-steed pair.

Walks one sense pair through expansion, comparison, and the two synset
expansions, then runs the whole pipeline with its concreteness and
frequency filters.
"""

from pathlib import Path

from lexanalogy import (
    ConceptId,
    FrequencyTable,
    Lexicon,
    Taxonomy,
    compare_graphs,
    expand_definition,
    extract_analogies,
    group_relations,
    serialize_definition,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "timber_steed"

lexicon = Lexicon.load(FIXTURES / "lexicon.tsv")
taxonomy = Taxonomy.load(FIXTURES / "taxonomy.tsv")
frequencies = FrequencyTable.load(FIXTURES / "freq.tsv")

# Step 1, definition expansion: a trivial single-concept definition is
# replaced by the defining concept's own definition.
steed = lexicon.words["駿馬"][1]
print("駿馬#1 before:", serialize_definition(steed.definition))
expanded = expand_definition(steed, lexicon)
print("駿馬#1 after: ", serialize_definition(expanded))

# Step 3, graph comparison: the good-timber sense differs from the expanded
# steed sense in exactly one concept node.
timber = lexicon.words["良材"][2].definition
diff = compare_graphs(timber, expanded)
print("\ndiffering concepts:", diff[0].text, "vs", diff[1].text)

# Steps 4-5, synset expansion on both sides.
print("left synset :", lexicon.synset_of(ConceptId.parse("wood|木")))
print("right synset:", lexicon.synset_of(ConceptId.parse("馬|horse")))

# The full pipeline applies the concrete-concept filter (everything under
# physical|物質) and the corpus-frequency filter at every step.
result = extract_analogies(lexicon, taxonomy, frequencies)
print("\nextracted analogies:")
for a in result.analogies:
    print(f"  {a.w1}:{a.w2} = {a.w3}:{{{','.join(a.synset)}}}")
report = result.report
print(
    f"stages: {report.sense_pairs} sense pairs -> {report.candidates} candidates"
    f" -> {report.post_filter} post-filter -> {report.final} final"
)

# Dropping a word below five corpus occurrences removes its analogies.
weakened = FrequencyTable({**frequencies.counts, "木頭": 4})
rerun = extract_analogies(lexicon, taxonomy, weakened)
print(f"\nwith 木頭 made rare: {len(rerun.analogies)} analogies")

# Word pairs linked by shared analogies form relation equivalence classes.
classes = group_relations(result.analogies)
print(f"relation classes: {len(classes)}")
for cls in classes:
    print(" ", cls.pairs)
