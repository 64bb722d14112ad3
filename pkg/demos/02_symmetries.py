"""Point symmetries of the Chazy equation and their commutator table.

Run: python demos/02_symmetries.py
"""

from painleve_forge.odefile import load_fixture
from painleve_forge.symmetry import VectorField, is_symmetry, prolong, structure_constants

chazy = load_fixture("chazy").equation()
fields = [
    VectorField.from_strings("1", "0"),
    VectorField.from_strings("x", "-y"),
    VectorField.from_strings("x^2", "-2*x*y - 6"),
    VectorField.from_strings("0", "y"),
]

for i, f in enumerate(fields, start=1):
    ok, cert = is_symmetry(f, chazy)
    first = prolong(f, 1)[0].to_str()
    verdict = "symmetry" if ok else f"not a symmetry (left over: {cert.to_str()})"
    print(f"X{i}: {f.to_str()}\n    first prolongation {first}\n    {verdict}")

table = structure_constants(fields[:3])
print("\nbrackets of X1, X2, X3:")
for (i, j), coords in sorted(table.brackets.items()):
    rhs = " + ".join(f"X{k + 1}" if c == 1 else f"{c}*X{k + 1}" for k, c in enumerate(coords) if c) or "0"
    print(f"  [X{i + 1}, X{j + 1}] = {rhs}")
print("closed:", table.closed)
