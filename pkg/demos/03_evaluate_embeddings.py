"""Answering analogy questions with vector arithmetic.

A question w1:w2 = w3:? is answered by the word closest in cosine to
v3 + v2 - v1 (the question words themselves excluded).  An answer is
correct when it lands anywhere in the question's synset, and questions
whose words are missing from the vocabulary don't count against coverage.
"""

import numpy as np

from lexanalogy import AnalogyQuestion, Embedding, answer_question, evaluate

rng = np.random.default_rng(0)

# A tiny embedding with kinship-like geometry: gender is one direction,
# generation another.
male = np.array([1.0, 0.0, 0.0])
female = np.array([-1.0, 0.0, 0.0])
older = np.array([0.0, 1.0, 0.0])
words = {
    "父": male,
    "母": female,
    "祖父": male + older,
    "祖母": female + older,
    "noise": np.array([0.3, -2.0, 4.0]),
}
emb = Embedding(list(words), np.array(list(words.values())))

q = AnalogyQuestion("父", "祖父", "母", ("祖母",))
print("父:祖父 = 母:?  ->", answer_question(emb, q))

# Synset answers: any member counts.
q2 = AnalogyQuestion("父", "祖父", "母", ("祖母", "外婆"))
report = evaluate(emb, [q, q2])
print(report.summary())

# Out-of-vocabulary questions are uncovered, not wrong.
q3 = AnalogyQuestion("父", "祖父", "missing", ("祖母",))
report = evaluate(emb, [q, q3])
print(f"with one OOV question: covered {report.covered} of {report.total}")

# Cosine is scale-free: scaling every vector leaves all answers unchanged.
scaled = Embedding(emb.words, emb.matrix * 7.3)
assert answer_question(scaled, q) == answer_question(emb, q)
print("scaling all vectors by 7.3 changes no answer")
