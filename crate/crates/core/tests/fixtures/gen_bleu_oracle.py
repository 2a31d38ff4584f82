#!/usr/bin/env python3
"""Freeze reference sacreBLEU outputs into bleu_oracle.json.

Run once with sacrebleu 2.x installed:

    python3 gen_bleu_oracle.py > bleu_oracle.json

The Rust test suites read the JSON and compare against it; this script is
not executed by `cargo test`.
"""

import json
import random

import sacrebleu
from sacrebleu.metrics import BLEU
from sacrebleu.tokenizers.tokenizer_13a import Tokenizer13a

SEED = 20240917

# Mix of plain words and tokens that exercise the 13a punctuation rules.
POOL = [
    "Die", "Familie", "isst", "abends", "im", "Restaurant", "der", "die",
    "das", "Haus.", "3.5", "z.B.", "(Familie)", "Mädchen", "Straße,",
    "ES-GIBT", "1-2", "&amp;", "\"Hallo\"", "a/b", "nur", "ein", "Programm",
    "in", "DDR.", "gibt", "es", "sehr", "gutes", "Essen", "Dozent", "fährt",
    "morgens", "mit", "dem", "Fahrrad", "zur", "Universität.", "10,000",
    "Preis:", "€5", "ja!", "wer?", "x&lt;y", "[Notiz]", "{a}", "100%", "-",
]

TOKENIZER_CASES = [
    "Es gab nur ein Programm in der DDR.",
    "",
    "3.5",
    "Der Preis ist 3,50 Euro, oder?",
    "Hallo, Welt!",
    "z.B. (vgl. oben)",
    "1-2 Tage",
    "&quot;Zitat&quot; &amp; mehr &lt;tag&gt;",
    "a<skipped>b",
    "Zeile-\nUmbruch\nhier",
    "Die Familie geht am Abend ins Restaurant, um zu essen.",
    "Morgen fahre ich mit dem Fahrrad zur Uni, weil mein Dozent sagt, frische Luft ist wichtig.",
    "Der Dolmetscher spricht mit der Familie des Mädchens.",
    "...",
    "1.000.000 und 2,5.",
    "E-Mail: test@example.org",
    "  viele   Leerzeichen  ",
    "Straße/Weg {x} [y] ~z^ `q`",
]

# Spoken-language references and system outputs of six qualitative examples.
QUALITATIVE = [
    ("Es gibt nur ein Programm in der DDR.", "Es gab nur ein Programm in der DDR."),
    ("Es gibt sehr viel gutes Essen.", "Dort gibt es sehr gutes Essen."),
    ("Letzte Woche gab es mehr Regen als erwartet.", "Letztens war ich im Urlaub auf Sardinien."),
    ("Die Familie geht am Abend ins Restaurant, um zu essen.", "Die Familie isst abends im Restaurant."),
    ("Der Dolmetscher spricht mit dem Mädchen.", "Der Dolmetscher spricht mit der Familie des Mädchens."),
    ("Morgen fahre ich mit dem Fahrrad zur Uni, weil mein Dozent sagt, frische Luft ist wichtig.",
     "Der Dozent fährt morgens mit dem Fahrrad zur Universität."),
]


def score(hyps, refs):
    out = {"bleu": [], "precisions": None}
    for order in range(1, 5):
        s = BLEU(max_ngram_order=order).corpus_score(hyps, [refs])
        out["bleu"].append(s.score)
        if order == 4:
            out["precisions"] = list(s.precisions)
            out["bp"] = s.bp
            out["hyp_len"] = s.sys_len
            out["ref_len"] = s.ref_len
    return out


def random_corpus(rng):
    vocab = rng.sample(POOL, rng.randint(3, 20))
    pairs = rng.randint(1, 10)
    hyps, refs = [], []
    for _ in range(pairs):
        ref = [rng.choice(vocab) for _ in range(rng.randint(1, 12))]
        mode = rng.random()
        if mode < 0.1:
            hyp = []
        elif mode < 0.6:
            hyp = list(ref)
            for _ in range(rng.randint(0, 3)):
                op = rng.random()
                if op < 0.33 and hyp:
                    del hyp[rng.randrange(len(hyp))]
                elif op < 0.66:
                    hyp.insert(rng.randint(0, len(hyp)), rng.choice(vocab))
                elif hyp:
                    hyp[rng.randrange(len(hyp))] = rng.choice(vocab)
        else:
            hyp = [rng.choice(vocab) for _ in range(rng.randint(0, 12))]
        hyps.append(" ".join(hyp))
        refs.append(" ".join(ref))
    return hyps, refs


def main():
    rng = random.Random(SEED)
    tok = Tokenizer13a()
    corpora = []
    for _ in range(200):
        hyps, refs = random_corpus(rng)
        entry = {"hyps": hyps, "refs": refs}
        entry.update(score(hyps, refs))
        corpora.append(entry)

    qual_hyps = [h for h, _ in QUALITATIVE]
    qual_refs = [r for _, r in QUALITATIVE]
    qualitative = []
    for n in (4, 6):
        entry = {"hyps": qual_hyps[:n], "refs": qual_refs[:n]}
        entry.update(score(qual_hyps[:n], qual_refs[:n]))
        qualitative.append(entry)

    doc = {
        "generator": "sacrebleu " + sacrebleu.__version__,
        "settings": "tokenize=13a smooth=exp case-sensitive, BLEU-n = BLEU(max_ngram_order=n)",
        "tokenizer": [{"text": t, "tokens": tok(t).split()} for t in TOKENIZER_CASES],
        "qualitative": qualitative,
        "corpora": corpora,
    }
    print(json.dumps(doc, ensure_ascii=False, indent=1))


if __name__ == "__main__":
    main()
