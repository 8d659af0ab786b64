#!/usr/bin/env python3
"""Generates the bundled synthetic proper-noun corpus.

Deterministic for a fixed seed. Writes:

  data/cp_wiki_d3k.tsv        3,000 unique Arabic words / 3,362 gloss pairs
  data/frequency_list.tsv     Zipf-shaped counts keyed by arabic_input
  data/few_shot_examples.tsv  6 curated prompt examples + 74 generated ones

Target corpus profile (checked before writing): 1.12 glosses per entry,
average Freeman similarity 0.91 +/- ~0.005, median frequency ~75, average
frequency ~60k, entity classes roughly 85/13/2 location/name/organization.
Gold lemmas are valid by construction: every non-final letter carries a
vowel or sukun, long vowels follow their matching short vowel, shadda
precedes its vowel, and final letters are bare (or carry a lone shadda).
"""

import argparse
import random
import sys
from pathlib import Path

FATHA, DAMMA, KASRA = "َ", "ُ", "ِ"
SUKUN, SHADDA = "ْ", "ّ"
MARKS = {FATHA, DAMMA, KASRA, SUKUN, SHADDA, "ٰ"}
ALIF, WAW, YA = "ا", "و", "ي"
ALIF_MADDA, ALIF_HAMZA, ALIF_HAMZA_BELOW = "آ", "أ", "إ"
TA_MARBUTA, ALIF_MAQSURA = "ة", "ى"

LONG_LETTER = {"A": ALIF, "U": WAW, "I": YA}
SHORT_MARK = {"a": FATHA, "u": DAMMA, "i": KASRA,
              "A": FATHA, "U": DAMMA, "I": KASRA}

# Onset consonants: (letter, [(gloss spelling, weight)], pick weight).
# Spellings mostly stay within the letter's shared sound class; the few
# digraphs (sh, kh, th) intentionally leak an extra class for realism.
CONSONANTS = [
    ("ب", [("b", 1)], 9),            # ba
    ("ت", [("t", 1)], 8),            # ta
    ("د", [("d", 1)], 8),            # dal
    ("ر", [("r", 1)], 10),           # ra
    ("ز", [("z", 1)], 4),            # zay
    ("س", [("s", 1)], 8),            # sin
    ("ش", [("sh", 2), ("s", 1)], 2), # shin
    ("ف", [("f", 2), ("v", 1)], 6),  # fa
    ("ق", [("q", 1)], 2),            # qaf
    ("ك", [("k", 3), ("c", 1)], 8),  # kaf
    ("ل", [("l", 1)], 9),            # lam
    ("م", [("m", 1)], 9),            # mim
    ("ن", [("n", 1)], 9),            # nun
    ("ه", [("h", 1)], 4),            # ha
    ("و", [("w", 1)], 4),            # waw (consonant use)
    ("ي", [("y", 1)], 3),            # ya (consonant use)
    ("ج", [("j", 1)], 4),            # jim
    ("غ", [("g", 4), ("gh", 1)], 3), # ghayn
    ("خ", [("kh", 1)], 1),           # kha
    ("ط", [("t", 1)], 2),            # Ta
    ("ص", [("s", 1)], 2),            # Sad
    ("ض", [("d", 1)], 1,),           # Dad
    ("ث", [("th", 1)], 1),           # tha
    ("ذ", [("d", 1)], 1),            # dhal
    ("ح", [("h", 1)], 2),            # Ha
    ("ظ", [("d", 1)], 1),            # Dha
    ("ع", [("", 1)], 2),             # ayn (gloss absorbed by vowel)
]

VOWEL_GLOSS = {
    "a": [("a", 1)],
    "u": [("u", 2), ("o", 2)],
    "i": [("i", 2), ("e", 1)],
    "A": [("a", 12), ("aa", 1)],
    "U": [("o", 6), ("u", 6), ("ou", 1)],
    "I": [("i", 8), ("e", 3), ("ee", 1)],
}

# Unrelated glosses for the translation-style slice of the corpus; these
# words are also pushed to the top of the frequency distribution.
TRANSLATED_GLOSSES = [
    "Egypt", "Eagle", "Giants", "Winter", "Summit", "Harvest", "Crescent",
    "Lighthouse", "Freedom", "Victory", "Sunrise", "Meadow", "Haven",
    "Bridge", "Garden", "Fortress", "Island", "River", "North", "South",
    "Star", "Moon", "Pearl", "Falcon", "Lion", "Rose", "Spring", "Autumn",
    "Castle", "Valley", "Tower", "Harbor", "Anchor", "Beacon", "Canyon",
    "Cedar", "Delta", "Ember", "Frontier", "Glacier", "Horizon", "Jubilee",
    "Kingdom", "Laurel", "Mirage", "Nebula", "Oasis", "Pinnacle", "Quarry",
    "Refuge", "Sanctuary", "Tempest", "Unity", "Vertex", "Wellspring",
    "Zenith", "Expanse", "Foothill", "Grove", "Lagoon",
]

# The first six prompt examples are curated; the rest are generated filler.
CURATED_EXAMPLES = [
    ("ايدكس", "IDEX",
     "إِيدِكس"),
    ("الغارديان", "Guardian",
     "غَارْدِيَان"),
    ("رودريغيز", "Rodriguez",
     "رُودْرِيغِيز"),
    ("اوروغواي", "Uruguay",
     "أُورُوغْوَاي"),
    ("بوتيه", "Boutier",
     "بُوتِيِه"),
    ("وايزمن", "Weizman",
     "وَايزْمَن"),
]


def weighted(rng, pairs):
    total = sum(w for _, w in pairs)
    roll = rng.random() * total
    for value, weight in pairs:
        roll -= weight
        if roll <= 0:
            return value
    return pairs[-1][0]


def pick_consonant(rng):
    entry = weighted(rng, [((c, g), w) for c, g, w in CONSONANTS])
    letter, gloss_opts = entry
    return letter, weighted(rng, gloss_opts)


class FreemanScorer:
    """LCS-over-sound-classes similarity, read from the shipped table."""

    def __init__(self, path):
        self.classes = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            symbol, klass = line.split("\t")
            self.classes[symbol] = klass

    def sequence(self, text):
        return [self.classes[ch] for ch in text.lower() if ch in self.classes]

    def similarity(self, arabic, gloss):
        a, b = self.sequence(arabic), self.sequence(gloss)
        if not a and not b:
            return 1.0
        prev = [0] * (len(b) + 1)
        for x in a:
            cur = [0] * (len(b) + 1)
            for j, y in enumerate(b, 1):
                cur[j] = prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1])
            prev = cur
        return 2.0 * prev[len(b)] / (len(a) + len(b))


class Word:
    __slots__ = ("lemma", "skeleton", "arabic_input", "glosses",
                 "entity_class", "frequency")


def build_word(rng, short_prob, kind="plain"):
    """One valid lemma plus its gloss. kind: plain|det|threemp|hamza|el."""
    syllables = weighted(rng, [(2, 30), (3, 42), (4, 23), (5, 5)])
    segs = []        # (letter, marks-string)
    gloss = []
    sukun_prob = 0.16
    long_prob = max(0.0, 1.0 - short_prob - sukun_prob)

    start = "plain"
    if kind == "hamza":
        start = weighted(rng, [("hamza-a", 5), ("hamza-i", 4), ("madda", 1)])
    elif kind == "el":
        start = "hamza-el"
    elif kind == "plain" and rng.random() < 0.06:
        start = weighted(rng, [("hamza-a", 2), ("hamza-i", 2), ("madda", 1)])

    if start == "madda":
        segs.append((ALIF_MADDA, ""))
        gloss.append("a")
    elif start != "plain":
        if start == "hamza-i" or start == "hamza-el":
            segs.append((ALIF_HAMZA_BELOW, KASRA))
            gloss.append(weighted(rng, [("e", 2), ("i", 1)]))
        else:
            mark = weighted(rng, [(FATHA, 2), (DAMMA, 1)])
            segs.append((ALIF_HAMZA, mark))
            gloss.append("a" if mark == FATHA else weighted(rng, [("o", 1), ("u", 1)]))
        if start == "hamza-el":
            segs.append(("ل", SUKUN))
            gloss.append("l")
        syllables = max(2, syllables - 1)

    prev_kind = "start"
    for k in range(syllables):
        letter, spelled = pick_consonant(rng)
        vowel = weighted(rng, [
            ("a", short_prob * 50), ("u", short_prob * 25), ("i", short_prob * 25),
            ("A", long_prob * 40), ("U", long_prob * 30), ("I", long_prob * 30),
            ("0", sukun_prob * 100),
        ])
        if k == syllables - 1 and vowel == "0":
            vowel = "A"  # final syllable always has a vowel to hang endings on
        if letter in (WAW, YA) and vowel == "0":
            vowel = "a"  # waw/ya with sukun would read as an unlicensed glide
        marks = ""
        if (rng.random() < 0.07 and k > 0 and prev_kind in ("short", "long")
                and vowel != "0"):
            marks += SHADDA  # gemination is invisible in the skeleton/gloss LCS
        if vowel == "0":
            segs.append((letter, marks + SUKUN))
            gloss.append(spelled)
            prev_kind = "cluster"
            continue
        segs.append((letter, marks + SHORT_MARK[vowel]))
        gloss.append(spelled)
        gloss.append(weighted(rng, VOWEL_GLOSS[vowel]))
        if vowel in LONG_LETTER:
            segs.append((LONG_LETTER[vowel], ""))
            prev_kind = "long"
        else:
            prev_kind = "short"

    if kind == "threemp":
        if prev_kind == "long":
            segs.pop()  # trailing long-vowel letter gives way to the -iyy tail
            if gloss and gloss[-1] and all(c in "aeiou" for c in gloss[-1]):
                gloss.pop()
        last, marks = segs[-1]
        segs[-1] = (last, (SHADDA if SHADDA in marks else "") + KASRA)
        segs.append((YA, SHADDA))
        gloss.append(weighted(rng, [("i", 2), ("y", 1)]))
    else:
        # dropping or geminating a final waw/ya would leave an unlicensed glide
        bare_ok = prev_kind == "short" and segs[-1][0] not in (WAW, YA)
        ending = weighted(rng, [
            ("coda", 45 if prev_kind != "cluster" else 80),
            ("open", 35 if prev_kind == "long" else 0),
            ("taa", 12 if prev_kind == "short" and segs[-1][1].endswith(FATHA) else 0),
            ("geminate", 4 if bare_ok else 0),
            ("drop", 20 if bare_ok else 0),
        ])
        if ending == "coda":
            letter, spelled = pick_consonant(rng)
            while letter in (WAW, YA, "ع"):
                letter, spelled = pick_consonant(rng)
            segs.append((letter, ""))
            gloss.append(spelled)
        elif ending == "taa":
            segs.append((TA_MARBUTA, ""))
            gloss.append(weighted(rng, [("h", 2), ("", 1)]))
        elif ending == "geminate":
            last, marks = segs[-1]
            segs[-1] = (last, SHADDA)
            if gloss and gloss[-1] and all(c in "aeiou" for c in gloss[-1]):
                gloss.pop()
            if gloss and len(gloss[-1]) == 1 and gloss[-1] not in "aeiou":
                gloss[-1] = gloss[-1] * 2
        elif ending == "drop":
            last, marks = segs[-1]
            segs[-1] = (last, marks.replace(FATHA, "").replace(DAMMA, "")
                        .replace(KASRA, ""))
            if gloss and gloss[-1] and all(c in "aeiou" for c in gloss[-1]):
                gloss.pop()
        # "open": long-vowel final letter is already bare

    word = Word()
    word.lemma = "".join(letter + marks for letter, marks in segs)
    word.skeleton = "".join(letter for letter, _ in segs)
    text = "".join(gloss)
    while len(text) < 3:
        text += weighted(rng, [("a", 2), ("o", 1), ("i", 1)])
    word.glosses = [text[0].upper() + text[1:]]

    word.arabic_input = word.skeleton
    if kind in ("hamza",) or (kind == "el" and rng.random() < 0.8):
        word.arabic_input = ALIF + word.skeleton[1:]
    if kind == "threemp":
        word.arabic_input = word.skeleton + WAW + "ن"
        base = word.glosses[0]
        if base[-1] in "iy":
            base = base[:-1]  # the -iyy tail is spelled by the suffix itself
        word.glosses = [base + weighted(rng, [("ians", 2), ("ans", 1), ("is", 1)])]
    if kind == "det":
        word.arabic_input = ALIF + "ل" + word.skeleton
        if rng.random() < 0.5:
            word.glosses = ["Al-" + word.glosses[0]]
    return word


def variant_gloss(rng, gloss):
    ops = []
    if "o" in gloss: ops.append(lambda g: g.replace("o", "ou", 1))
    if "ou" in gloss: ops.append(lambda g: g.replace("ou", "u", 1))
    if "i" in gloss[1:]: ops.append(lambda g: g[0] + g[1:].replace("i", "ee", 1))
    if "k" in gloss: ops.append(lambda g: g.replace("k", "c", 1))
    if "c" in gloss: ops.append(lambda g: g.replace("c", "k", 1))
    if gloss[-1] in "aiou": ops.append(lambda g: g + "h")
    if gloss[-1] == "h": ops.append(lambda g: g[:-1])
    if gloss[-1] in "bdfgklmnprstz": ops.append(lambda g: g + "e")
    # double an inner consonant (Ana -> Anna)
    inner = [i for i in range(1, len(gloss) - 1)
             if gloss[i].isalpha() and gloss[i] not in "aeiou"]
    if inner:
        ops.append(lambda g: (lambda i: g[:i] + g[i] + g[i:])(rng.choice(inner)))
    if not ops:
        ops.append(lambda g: g + "a")
    return rng.choice(ops)(gloss)


def zipf_counts(rng, n_words, target_avg, target_median):
    """Pick exponent s so mean/median matches, then scale to the median."""
    ratio_target = target_avg / target_median
    lo, hi = 1.4, 2.6
    for _ in range(60):
        s = (lo + hi) / 2
        raw = [(r + 1.0) ** -s for r in range(n_words)]
        mean = sum(raw) / n_words
        med = sorted(raw)[n_words // 2]
        if mean / med > ratio_target:
            hi = s
        else:
            lo = s
    raw_med = sorted(raw)[n_words // 2]
    scale = target_median / raw_med
    return [max(1, round(v * scale)) for v in raw]


def generate(seed, out_dir):
    freeman = FreemanScorer(out_dir / "freeman_classes.tsv")
    short_prob = 0.30
    words = None
    for attempt in range(40):
        rng = random.Random(seed)  # same stream; short_prob drives the change
        words = []
        seen = set()
        quota = (["det"] * 240 + ["threemp"] * 45 + ["hamza"] * 115 +
                 ["el"] * 5)
        quota += ["plain"] * (3000 - len(quota))
        rng.shuffle(quota)
        for kind in quota:
            for _ in range(200):
                w = build_word(rng, short_prob, kind)
                if w.arabic_input not in seen and 3 <= len(w.skeleton) <= 11:
                    seen.add(w.arabic_input)
                    words.append(w)
                    break
            else:
                raise RuntimeError("could not build a fresh word")

        # translation-style glosses on a slice of the corpus
        translated = rng.sample(range(3000), len(TRANSLATED_GLOSSES))
        for slot, text in zip(translated, TRANSLATED_GLOSSES):
            words[slot].glosses = [text]
        translated_set = set(translated)

        # multi-gloss rows: 300 doubles + 31 triples -> 3,362 pairs
        eligible = [i for i in range(3000) if i not in translated_set]
        multi = rng.sample(eligible, 331)
        for i in multi[:300]:
            base = words[i].glosses[0]
            words[i].glosses.append(variant_gloss(rng, base))
        for i in multi[300:]:
            base = words[i].glosses[0]
            second = variant_gloss(rng, base)
            third = variant_gloss(rng, second)
            if third in (base, second):
                third = second + "a"
            words[i].glosses.extend([second, third])

        sims = [freeman.similarity(w.arabic_input, g)
                for w in words for g in w.glosses]
        avg = sum(sims) / len(sims)
        if 0.906 <= avg <= 0.914:
            break
        short_prob = max(0.02, min(0.65, short_prob + (avg - 0.910) * 1.6))
    else:
        raise RuntimeError(f"freeman average did not converge: {avg:.4f}")

    pairs = sum(len(w.glosses) for w in words)
    assert len(words) == 3000 and pairs == 3362, (len(words), pairs)

    # frequencies: translation-style words take the top ranks
    counts = zipf_counts(random.Random(seed + 1), 3000,
                         target_avg=61544, target_median=75)
    rng2 = random.Random(seed + 2)
    order = [i for i in range(3000) if i not in translated_set]
    rng2.shuffle(order)
    ranked = list(translated_set)
    rng2.shuffle(ranked)
    ranked += order
    for rank, slot in enumerate(ranked):
        words[slot].frequency = counts[rank]

    for w in words:
        roll = rng2.random()
        w.entity_class = ("location" if roll < 0.852
                          else "name" if roll < 0.980 else "organization")

    entry_freqs = sorted(w.frequency for w in words for _ in w.glosses)
    n = len(entry_freqs)
    median = (entry_freqs[n // 2] if n % 2
              else (entry_freqs[n // 2 - 1] + entry_freqs[n // 2]) / 2)
    mean = sum(entry_freqs) / n

    print(f"unique={len(words)} pairs={pairs} glosses/entry={pairs/len(words):.2f}")
    print(f"freeman_avg={avg:.4f} freq_median={median:.1f} freq_avg={mean:.1f} "
          f"short_prob={short_prob:.3f} attempts={attempt + 1}")
    assert 60 <= median <= 90, median
    assert 45000 <= mean <= 80000, mean
    return words


def write_corpus(words, out_dir):
    lines = [
        "# Synthetic proper-noun corpus: diacritized lemma annotations over",
        "# undiacritized Arabic inputs with English glosses. Generated by",
        "# scripts/gen_dataset.py (deterministic; regenerate with --seed 20250819).",
        "id\tarabic_input\tgloss\tgold_lemma\tfrequency\tentity_class",
    ]
    for idx, w in enumerate(words, 1):
        lines.append("\t".join([
            f"w{idx:04d}", w.arabic_input, "; ".join(w.glosses), w.lemma,
            str(w.frequency), w.entity_class,
        ]))
    (out_dir / "cp_wiki_d3k.tsv").write_text("\n".join(lines) + "\n",
                                             encoding="utf-8")

    freq_lines = ["# word\tcount"]
    for w in sorted(words, key=lambda w: -w.frequency):
        freq_lines.append(f"{w.arabic_input}\t{w.frequency}")
    (out_dir / "frequency_list.tsv").write_text("\n".join(freq_lines) + "\n",
                                                encoding="utf-8")


def write_examples(seed, short_prob, out_dir):
    rng = random.Random(seed + 7)
    lines = ["# few-shot prompt examples: <arabic_input>\t<gloss>\t<lemma>",
             "# first six rows are curated reference examples; the rest are",
             "# generated filler in the same format"]
    for row in CURATED_EXAMPLES:
        lines.append("\t".join(row))
    kinds = ["det"] * 3 + ["threemp"] * 2 + ["hamza"] * 2 + ["plain"] * 67
    rng.shuffle(kinds)
    seen = set()
    for kind in kinds:
        while True:
            w = build_word(rng, short_prob, kind)
            if w.arabic_input not in seen and 3 <= len(w.skeleton) <= 11:
                seen.add(w.arabic_input)
                break
        lines.append("\t".join([w.arabic_input, w.glosses[0], w.lemma]))
    (out_dir / "few_shot_examples.tsv").write_text("\n".join(lines) + "\n",
                                                   encoding="utf-8")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20250819)
    parser.add_argument("--out", type=Path,
                        default=Path(__file__).resolve().parent.parent / "data")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    words = generate(args.seed, args.out)
    write_corpus(words, args.out)
    write_examples(args.seed, 0.30, args.out)
    print(f"wrote {args.out / 'cp_wiki_d3k.tsv'}")
    print(f"wrote {args.out / 'frequency_list.tsv'}")
    print(f"wrote {args.out / 'few_shot_examples.tsv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
