"""Scan order-64 cyclic extensions of the order-32 corpus for Case 2A groups."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent))

from make_corpus import candidate_extensions, extension_presentation
from pgaut.automorphism import automorphism_group
from pgaut.engine import consistency_check, enumerate_group
from pgaut.harness import classify
from pgaut.presentation import parse_corpus, serialize_presentation
from pgaut.structure import center

SRC = Path(__file__).resolve().parent.parent / "corpus" / "order32.pc"

hits = []
for pres in parse_corpus(SRC.read_text()):
    M = enumerate_group(pres)
    ag = automorphism_group(M)
    if ag.matrix is None:
        print(f"skip {pres.name}: |Aut| = {ag.order} beyond store cap")
        continue
    count = 0
    for idx, (alpha, m0) in enumerate(candidate_extensions(M)):
        cand = extension_presentation(f"x{pres.name}_{idx}", M, alpha, m0)
        G = enumerate_group(cand)
        cls = classify(G)
        count += 1
        if cls.case2a:
            z = center(G).order
            hits.append((pres.name, idx, z, cand))
            print(f"HIT {pres.name} ext {idx}: |Z| = {z}")
    print(f"{pres.name}: {count} extensions")

print(f"total case2a hits: {len(hits)}")
for base, idx, z, cand in hits[:8]:
    G = enumerate_group(cand)
    assert consistency_check(G).consistent
    print(f"--- from {base} ext {idx}, |Z| = {z}")
    print(serialize_presentation(cand))
