#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Writes the small JSONL fixtures under tests/fixtures.

Sentences come from a toy grammar whose SRL frames are known exactly, so the
annotations are gold by construction. Output is deterministic.
"""

import argparse
import json
import random
from pathlib import Path

SUBJECTS = ["dog", "cat", "man", "woman", "child", "farmer", "pilot", "singer"]
VERBS = [
    ("painted", "paint"),
    ("chased", "chase"),
    ("carried", "carry"),
    ("watched", "watch"),
    ("cleaned", "clean"),
    ("repaired", "repair"),
    ("visited", "visit"),
    ("followed", "follow"),
]
OBJECTS = ["ball", "fence", "boat", "house", "car", "bike", "garden", "bridge"]
PLACES = ["park", "city", "village", "market"]
TIMES = ["yesterday", "today", "recently"]


def premise(rng):
    subj, (verb, base), obj, place = (
        rng.choice(SUBJECTS),
        rng.choice(VERBS),
        rng.choice(OBJECTS),
        rng.choice(PLACES),
    )
    words = ["a", subj, verb, "the", obj, "in", "the", place]
    tags = ["B-ARG0", "I-ARG0", "V", "B-ARG1", "I-ARG1", "B-ARGM-LOC", "I-ARGM-LOC", "I-ARGM-LOC"]
    return (subj, verb, base, obj, place), words, [{"pred": 2, "tags": tags}]


def hypothesis(parts, label, rng):
    subj, verb, base, obj, _ = parts
    if label == 0:  # entailment: drop the location
        words = ["a", subj, verb, "the", obj]
        tags = ["B-ARG0", "I-ARG0", "V", "B-ARG1", "I-ARG1"]
        return words, [{"pred": 2, "tags": tags}]
    if label == 1:  # neutral: add a time the premise does not state
        words = ["a", subj, verb, "the", obj, rng.choice(TIMES)]
        tags = ["B-ARG0", "I-ARG0", "V", "B-ARG1", "I-ARG1", "B-ARGM-TMP"]
        return words, [{"pred": 2, "tags": tags}]
    # contradiction: negate the event
    words = ["a", subj, "did", "not", base, "the", obj]
    tags = ["B-ARG0", "I-ARG0", "O", "B-ARGM-NEG", "V", "B-ARG1", "I-ARG1"]
    return words, [{"pred": 4, "tags": tags}]


def nli(rng, n, prefix):
    out = []
    for i in range(n):
        parts, words_a, srl_a = premise(rng)
        label = i % 3
        words_b, srl_b = hypothesis(parts, label, rng)
        out.append({"id": f"{prefix}-{i:03d}", "words_a": words_a, "words_b": words_b,
                    "srl_a": srl_a, "srl_b": srl_b, "label": label})
    rng.shuffle(out)
    return out


def sts(rng, n, prefix):
    out = []
    for i in range(n):
        parts, words_a, srl_a = premise(rng)
        kind = i % 3
        words_b, srl_b = hypothesis(parts, kind, rng)
        score = [4.0, 2.5, 1.0][kind] + round(rng.uniform(-0.4, 0.4), 2)
        out.append({"id": f"{prefix}-{i:03d}", "words_a": words_a, "words_b": words_b,
                    "srl_a": srl_a, "srl_b": srl_b, "label": score})
    return out


def qa(rng, n, prefix):
    out = []
    for i in range(n):
        parts, passage, srl_p = premise(rng)
        subj, verb, base, obj, place = parts
        kind = i % 4
        if kind == 0:
            q = ["who", verb, "the", obj, "?"]
            srl_q = [{"pred": 1, "tags": ["B-ARG0", "V", "B-ARG1", "I-ARG1", "O"]}]
            answers = [[0, 1]]
        elif kind == 1:
            q = ["what", "did", "the", subj, base, "?"]
            srl_q = [{"pred": 4, "tags": ["B-ARG1", "O", "B-ARG0", "I-ARG0", "V", "O"]}]
            answers = [[3, 4]]
        elif kind == 2:
            q = ["where", "did", "the", subj, base, "the", obj, "?"]
            srl_q = [{"pred": 4, "tags": ["B-ARGM-LOC", "O", "B-ARG0", "I-ARG0", "V",
                                          "B-ARG1", "I-ARG1", "O"]}]
            answers = [[5, 7]]
        else:
            other = rng.choice([o for o in OBJECTS if o != obj])
            q = ["who", verb, "the", other, "?"]
            srl_q = [{"pred": 1, "tags": ["B-ARG0", "V", "B-ARG1", "I-ARG1", "O"]}]
            answers = []
        out.append({"id": f"{prefix}-{i:03d}", "words_a": q, "words_b": passage,
                    "srl_a": srl_q, "srl_b": srl_p, "answers": answers})
    return out


def write(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "tests" / "fixtures"))
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    write(out / "snli_64.jsonl", nli(rng, 64, "nli"))
    write(out / "snli_dev_24.jsonl", nli(rng, 24, "nli-dev"))
    write(out / "sts_24.jsonl", sts(rng, 24, "sts"))
    write(out / "squad_train_48.jsonl", qa(rng, 48, "qa"))
    write(out / "squad_dev_24.jsonl", qa(rng, 24, "qa-dev"))


if __name__ == "__main__":
    main()
