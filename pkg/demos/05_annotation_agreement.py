"""The human-in-the-loop stage: verdicts, agreement, and their effect.

Concept analogies found by graph comparison go to linguists, who accept or
reject each one and prune non-synonymous words out of synsets.  Fleiss'
kappa summarizes how much the annotators agree; verdicts then feed back
into extraction.
"""

from pathlib import Path

from lexanalogy import (
    FrequencyTable,
    Lexicon,
    Taxonomy,
    Verdict,
    extract_analogies,
    fleiss_kappa,
)
from lexanalogy.annotation import (
    AnnotationSession,
    build_concept_tasks,
    build_synset_tasks,
    extraction_verdicts,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "timber_steed"

lexicon = Lexicon.load(FIXTURES / "lexicon.tsv")
taxonomy = Taxonomy.load(FIXTURES / "taxonomy.tsv")
frequencies = FrequencyTable.load(FIXTURES / "freq.tsv")

base = extract_analogies(lexicon, taxonomy, frequencies)
tasks = build_concept_tasks(base.concept_analogies, lexicon)
tasks += build_synset_tasks(base.concept_analogies, lexicon, frequencies, 5)
print(f"{len(tasks)} annotation tasks from {len(base.concept_analogies)} concept analogies")

session = AnnotationSession(tasks, ["linguist1", "linguist2", "linguist3"], seed=0)
concept_task = tasks[0]

# Two annotators accept, one rejects: the majority keeps the analogy.
session.submit_verdict(Verdict(concept_task.id, "linguist1", "correct"))
session.submit_verdict(Verdict(concept_task.id, "linguist2", "correct"))
session.submit_verdict(Verdict(concept_task.id, "linguist3", "incorrect"))

report = session.agreement()["concept_analogies"]
print(f"items labeled by everyone: {report.n_items}, kappa: {report.kappa}")

# Fleiss' kappa on a classic hand case: half agreement, skewed labels.
print("kappa for [[A,A],[A,B]]:", round(fleiss_kappa([["A", "A"], ["A", "B"]]), 4))

# A synset verdict prunes the answer set in the next extraction run.
horse_synset = next(t for t in tasks if getattr(t, "concept", None) is not None)
session.submit_verdict(
    Verdict(horse_synset.id, "linguist1", {"山馬": "remove"})
)
verdicts = extraction_verdicts(session, policy="permissive")
refined = extract_analogies(lexicon, taxonomy, frequencies, verdicts=verdicts)
for a in refined.analogies:
    print(f"after pruning: {a.w1}:{a.w2} = {a.w3}:{{{','.join(a.synset)}}}")
