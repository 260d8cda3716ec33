#!/usr/bin/env python3
"""Regenerates the synthetic movie-review corpus (train.tsv / heldout.tsv).

The corpus is fully synthetic: seeded templates over AFINN-111 polar words,
neutral film vocabulary, and invented title tokens. It is NOT a sample of any
real review dataset. Properties the evaluation relies on:
  - two classes (pos/neg), 500 rows per file, label<TAB>text
  - ~8% label noise (flipped after text generation)
  - ~25% mixed-sentiment rows whose true label follows the majority bank
  - each row mentions an invented title; train and heldout title pools are
    disjoint, so title tokens cannot leak across the split
  - polar vocabulary is split into common and rare banks: train rows draw
    rare words with probability 0.05 per slot, heldout rows with 0.5, so a
    learner that only memorizes the training surface underperforms on
    heldout rows built from rare words
"""

import random

POS_COMMON = ["great", "good", "wonderful", "fantastic", "fun", "lovely",
              "charming", "solid", "fine", "clever", "stunning", "perfect"]
POS_RARE = ["superb", "outstanding", "breathtaking", "amazing", "brilliant"]
NEG_COMMON = ["bad", "awful", "terrible", "boring", "dull", "poor", "weak",
              "lame", "ugly", "disappointing"]
NEG_RARE = ["miserable", "catastrophic", "horrible", "dreadful"]
NEUTRAL = ["movie", "film", "plot", "acting", "director", "cast", "scene",
           "script", "pacing", "dialogue", "ending", "soundtrack", "camera",
           "story", "performance", "characters", "editing", "visuals",
           "premise", "finale", "tone", "humor", "writing", "score"]

TEMPLATES = [
    "the {n0} in {name} is {p0} and the {n1} is {p1}",
    "{name} is a {p0} {n0} with {p1} {n1}",
    "i found {name} {p0} from start to finish with {p1} {n0}",
    "a {p0} {n0} and a {p1} {n1} make {name} worth talking about",
    "the {n0} feels {p0} and the {n1} of {name} is {p1}",
    "{name} delivers {p0} {n0} and {p1} {n1}",
    "watching {name} again the {n0} still seems {p0} and the {n1} {p1}",
    "for all its {n0} {name} stays {p0} with {p1} {n1}",
]

MIXED_TAIL = " but the {n2} is {off}"

CONS = "bdfgklmnprstvz"
VOWS = "aeiou"


def make_names(rng, count):
    names = set()
    while len(names) < count:
        syllables = rng.randint(2, 3)
        name = "".join(rng.choice(CONS) + rng.choice(VOWS) for _ in range(syllables))
        if syllables == 2:
            name += rng.choice(CONS)
        names.add(name)
    return sorted(names)


def pick_polar(rng, common, rare, rare_prob):
    """Two distinct polar words; rare-bank words appear with rare_prob per slot.

    Train rows keep rare_prob low so the rare vocabulary is underrepresented;
    heldout rows sample the full bank uniformly. Augmentation closes that gap
    by reintroducing rare words via embedding neighbors and keyword pools.
    """
    words = []
    while len(words) < 2:
        bank = rare if rng.random() < rare_prob else common
        w = rng.choice(bank)
        if w not in words:
            words.append(w)
    return words


def make_row(rng, label, names, rare_prob):
    if label == "pos":
        common, rare, off = POS_COMMON, POS_RARE, NEG_COMMON
    else:
        common, rare, off = NEG_COMMON, NEG_RARE, POS_COMMON
    p0, p1 = pick_polar(rng, common, rare, rare_prob)
    n0, n1, n2 = rng.sample(NEUTRAL, 3)
    text = rng.choice(TEMPLATES).format(
        name=rng.choice(names), p0=p0, p1=p1, n0=n0, n1=n1)
    if rng.random() < 0.25:
        text += MIXED_TAIL.format(n2=n2, off=rng.choice(off))
    return text


def make_file(path, rng, names, rows, noise, rare_prob):
    lines = []
    for i in range(rows):
        true = "pos" if i % 2 == 0 else "neg"
        text = make_row(rng, true, names, rare_prob)
        label = true
        if rng.random() < noise:
            label = "neg" if true == "pos" else "pos"
        lines.append(f"{label}\t{text}\n")
    rng.shuffle(lines)
    with open(path, "w") as f:
        f.writelines(lines)


def main():
    rng = random.Random(20240815)
    train_names = make_names(rng, 400)
    held_pool = make_names(rng, 560)
    held_names = sorted(set(held_pool) - set(train_names))[:120]
    make_file("train.tsv", random.Random(rng.random()), train_names, 500, 0.10, 0.05)
    make_file("heldout.tsv", random.Random(rng.random()), held_names, 500, 0.10, 0.35)


if __name__ == "__main__":
    main()
