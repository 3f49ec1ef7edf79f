"""Regenerate the exhaustive phrase-table corpus under src/lasmp/data/corpus.

Every synonym of the unified-entity table appears bare and inside a carrier
sentence; each prohibition trigger is combined with both sides in four phrasings.
Labels come straight from the table rows, not from the extractor.

    python tools/build_corpora.py
"""

from pathlib import Path

ROWS = {
    "STRAIGHT": ["go straight", "move straight", "go ahead", "proceed in a straight line"],
    "RIGHT": ["go right", "turn right", "move right", "take a right", "right turn", "go rightward"],
    "LEFT": ["turn left", "left turn", "take a left", "move left", "head left", "go leftward"],
    "BACKWARD": ["go down", "move down", "go back"],
    "ZONE": ["bedroom", "kitchen", "living room", "dining room", "bathroom", "laundry"],
}
TRIGGERS = ["do not", "avoid taking", "skip", "not to take"]
SIDES = {"right": "NR", "left": "NL"}
PROHIBITION_FORMS = ["{t} {s}", "{t} the {s}", "{t} the {s} turn", "{t} {s} turn"]
CARRIERS = {
    "ZONE": "please head to the {p}",
    None: "please {p} now",
}


def rows():
    for label, phrases in ROWS.items():
        carrier = CARRIERS.get(label, CARRIERS[None])
        for p in phrases:
            yield p, label
            yield carrier.format(p=p), label
    for t in TRIGGERS:
        for side, label in SIDES.items():
            for form in PROHIBITION_FORMS:
                p = form.format(t=t, s=side)
                yield p, label
                yield f"{p} here", label


def main():
    out = Path(__file__).resolve().parents[1] / "src" / "lasmp" / "data" / "corpus" / "synonyms.tsv"
    lines = ["# phrase-table corpus: every synonym maps to exactly one unified entity"]
    lines += [f"{s}\t{label}" for s, label in rows()]
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"{len(lines) - 1} rows -> {out}")


if __name__ == "__main__":
    main()
