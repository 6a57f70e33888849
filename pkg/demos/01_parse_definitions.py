"""Parsing structured sense definitions into graphs.

Ontology tokens come in three shapes: attributes are Latin letters, words
are fully non-Latin, and concepts pair an English and a Chinese name with a
vertical bar.  A definition nests concepts under attribute labels, with
functions like or(...) and the self-reference "~".
"""

from lexanalogy import classify_token, parse_definition, serialize_definition

for token in ["telic", "協", "help|幫助", "駿馬|ExcellentSteed"]:
    print(f"{token!r:<25} -> {classify_token(token).value}")

# The laboratory entry: a place whose purpose is experiment or research,
# each happening at the place itself (the "~" leaf).
laboratory = (
    "{InstitutePlace|場所:telic={or({experiment|實驗:location={~}},"
    "{research|研究:location={~}})}}"
)
graph = parse_definition(laboratory)
print(f"\n{laboratory}")
print(f"parsed into {graph.n_nodes} nodes / {len(graph.edges)} edges:")
print(graph.to_listing())

# Serialization is the exact inverse on canonical strings.
assert serialize_definition(graph) == laboratory
print("\nround-trip: serialize(parse(text)) == text")

# Concept names compare order-insensitively: the two halves can swap.
left = parse_definition("{help|幫助}")
right = parse_definition("{幫助|help}")
assert left == right
print("graph equality ignores the written order of concept halves")

# Malformed definitions fail with a byte offset, never a partial graph.
try:
    parse_definition("{InstitutePlace|場所:telic=}")
except Exception as exc:
    print(f"\nlocated parse error: {exc}")
