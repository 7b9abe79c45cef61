#!/usr/bin/env python3
"""Brute-force recount of a corpus package.

Re-derives wordform and lemma frequencies, rank lists, length histograms and
a few statistics straight from the raw texts and the lexicon table, without
sharing code with the C++ pipeline. The results are frozen as golden files.
"""
import argparse
import json
import math
import os
import re
import sys
import unicodedata
from collections import Counter, defaultdict

POS_ORDER = [
    "noun", "noun_pl_tantum", "adjective", "pronoun", "numeral", "verb", "participle",
    "adverb", "preposition", "conjunction", "particle", "interjection", "abbreviation",
    "foreign", "other",
]
CONTENT_POS = {"noun", "noun_pl_tantum", "adjective", "pronoun", "numeral", "verb", "participle"}
ENCLITICS = ["бо", "но", "таки", "то"]

EUPHONIC = [
    ("ся", ["ся", "сь"]), ("іти", ["іти", "йти"]), ("щоб", ["щоб", "щоби"]), ("і", ["і", "й"]),
    ("же", ["ж", "же"]), ("би", ["б", "би"]), ("в", ["у", "в"]), ("з", ["з", "із", "зі", "зо"]),
    ("під", ["під", "підо"]), ("весь", ["весь", "увесь", "ввесь"]), ("всякий", ["всякий", "усякий"]),
]
ORTHOGRAPHIC = [
    ("тільки", ["тільки", "тілько"]), ("скільки", ["скільки", "скілько"]),
    ("ледве", ["ледве", "ледво"]), ("трохи", ["трохи", "троха"]),
]

APOSTROPHES = "'’ʼ"
HYPHENS = "-‐‑"
STRESS = "́̀"
VOWELS = set("аеиіоуяюєї")
UKR_ALPHABET = "абвгґдеєжзиіїйклмнопрстуфхцчшщьюя"


# ---- ingest -------------------------------------------------------------------

def strip_notes(text, open_mark="⟦", close_mark="⟧"):
    out, depth = [], 0
    for ch in text:
        if ch == open_mark:
            depth += 1
        elif ch == close_mark:
            if depth == 0:
                raise ValueError("unbalanced note close")
            depth -= 1
        elif depth == 0:
            out.append(ch)
    if depth:
        raise ValueError("unterminated note")
    return "".join(out)


def expand_brackets(text):
    return re.sub(r"\[([^\[\]]*)\]", r"\1", text)


def extract_tags(text):
    """Returns clean text and a list of (begin, end, tag) ranges."""
    clean, tags = [], []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "{":
            j = text.index("}", i)
            end = len(clean)
            begin = end
            while begin > 0 and is_word_char(clean[begin - 1]):
                begin -= 1
            tags.append((begin, end, text[i + 1:j]))
            i = j + 1
            continue
        clean.append(ch)
        i += 1
    return "".join(clean), tags


def is_letter(ch):
    return unicodedata.category(ch).startswith("L")


def is_mark(ch):
    return 0x300 <= ord(ch) <= 0x36F


def is_joiner(ch):
    return ch in APOSTROPHES or ch in HYPHENS


def is_word_char(ch):
    return is_letter(ch) or is_mark(ch) or is_joiner(ch) or ch.isdigit()


# ---- tokens -------------------------------------------------------------------

TOKEN_RE = re.compile(r"[0-9]+|[^\W\d_]+|[̀-ͯ'’ʼ\-‐‑]", re.UNICODE)


def tokenize(text):
    """Yields (offset, surface). Letters, marks and joiners glue together;
    digit runs stand alone."""
    spans = []
    run_start = None
    pos = 0
    for m in TOKEN_RE.finditer(text):
        piece = m.group(0)
        if piece.isdigit() and piece.isascii():
            if run_start is not None:
                spans.append((run_start, pos))
                run_start = None
            spans.append((m.start(), m.end()))
            continue
        if run_start is not None and m.start() != pos:
            spans.append((run_start, pos))
            run_start = None
        if run_start is None:
            run_start = m.start()
        pos = m.end()
    if run_start is not None:
        spans.append((run_start, pos))
    for b, e in spans:
        s = text[b:e]
        if not (s.isdigit() and s.isascii()):
            while s and (is_joiner(s[0]) or is_mark(s[0])):
                s = s[1:]
                b += 1
            while s and is_joiner(s[-1]):
                s = s[:-1]
        if s:
            yield b, s


def normalize(surface, keep=frozenset()):
    s = surface.lower()
    s = "".join("'" if c in APOSTROPHES else "-" if c in HYPHENS else c for c in s)
    if s in keep:
        return s
    return "".join(c for c in s if c not in STRESS)


def script_of(text):
    kinds = set()
    for c in text:
        if c.isdigit() and c.isascii():
            kinds.add("digit")
        elif is_letter(c):
            kinds.add("cyrillic" if "CYRILLIC" in unicodedata.name(c, "") else "latin")
    if kinds == {"digit"}:
        return "digit"
    if len(kinds) == 1:
        return kinds.pop()
    return "mixed" if kinds else "cyrillic"


# ---- lexicon ------------------------------------------------------------------

def upper_lemma(lemma):
    return lemma.upper() if any("CYRILLIC" in unicodedata.name(c, "") for c in lemma) else lemma


class Lexicon:
    def __init__(self):
        self.entries = defaultdict(list)  # key -> [(lemma, pos, disamb, lang, priority)]
        self.bindings = {}
        self.variant_of = {}

    def canonical(self, form):
        return self.variant_of.get(form, form)

    @staticmethod
    def load(path, default_variants=True):
        lex = Lexicon()
        rows, groups, occ = [], [], []
        for raw in open(path, encoding="utf-8"):
            line = raw.rstrip("\n").rstrip("\r")
            if not line or line.startswith("#"):
                continue
            f = line.split("\t")
            if f[0] == "@variant":
                groups.append((f[2], f[3].split("|")))
            elif f[0] == "@occurrence":
                occ.append(f)
            else:
                f += [""] * (6 - len(f))
                rows.append((normalize(f[0], keep=frozenset([f[0].lower()])), upper_lemma(f[1]), f[2],
                             f[3] or None, f[4] or None, int(f[5] or 0)))
        taken = set()
        for head, members in groups:
            for m in members:
                lex.variant_of[m] = head
                taken.add(m)
        if default_variants:
            for head, members in EUPHONIC + ORTHOGRAPHIC:
                if taken.isdisjoint(members):
                    for m in members:
                        lex.variant_of[m] = head
        for key, lemma, pos, dis, lang, prio in rows:
            entry = lex.entries[lex.canonical(key)]
            for i, c in enumerate(entry):
                if c[:4] == (lemma, pos, dis, lang):
                    entry[i] = c[:4] + (max(c[4], prio),)
                    break
            else:
                entry.append((lemma, pos, dis, lang, prio))
        for f in occ:
            f += [""] * (9 - len(f))
            lex.bindings[(f[1], int(f[2]))] = (upper_lemma(f[4]), f[5], f[6] or None, f[7] or None)
        return lex

    def accented(self):
        return frozenset(k for k in self.entries if any(c in STRESS for c in k))

    def preferred(self, key):
        cands = self.entries.get(key, [])
        if len(cands) == 1:
            return cands[0][:4]
        if len(cands) > 1:
            top = max(c[4] for c in cands)
            winners = [c for c in cands if c[4] == top]
            if len(winners) == 1:
                return winners[0][:4]
        return None


# ---- lemmatization ------------------------------------------------------------

def lemmatize(doc_id, offset, norm, tag, lex):
    """Returns (form_key, lemma tuple or None)."""
    key = lex.canonical(norm)
    if norm.isdigit() and norm.isascii():
        return key, (norm, "numeral", None, None)
    if (doc_id, offset) in lex.bindings:
        return key, lex.bindings[(doc_id, offset)]
    lookup = key
    kept = None
    if "-" in norm and key not in lex.entries:
        for p in ENCLITICS:
            suffix = "-" + p
            if norm.endswith(suffix) and len(norm) > len(suffix):
                base = lex.canonical(norm[: -len(suffix)])
                if any(c[1] in CONTENT_POS for c in lex.entries.get(base, [])):
                    lookup = base
                else:
                    pref = lex.preferred(base)
                    if pref:
                        kept = (upper_lemma(pref[0] + suffix),) + pref[1:]
                break
    if tag is not None:
        for c in lex.entries.get(lookup, []):
            if c[2] == tag:
                return key, c[:4]
        cands = lex.entries.get(lookup, [])
        if cands:
            top = max(c[4] for c in cands)
            first = next(c for c in cands if c[4] == top)
            return key, (first[0], first[1], tag, first[3])
        return key, (upper_lemma(lookup), "other", tag, None)
    pref = lex.preferred(lookup)
    if pref:
        return key, pref
    return key, kept


# ---- statistics ---------------------------------------------------------------

def syllables(form):
    return sum(1 for c in form.lower() if c in VOWELS)


def phonemes(form):
    total = 0
    for part in form.lower().split("-"):
        part = "".join(c for c in part if not is_mark(c))
        part = part.replace("дз", "Ж").replace("дж", "Ж")
        prev = None
        for c in part:
            if c in "ь" or c in APOSTROPHES:
                prev = c
                continue
            if not is_letter(c):
                prev = c
                continue
            if c in "щї":
                total += 2
            elif c in "яює":
                total += 2 if (prev is None or prev in VOWELS or prev == "ь" or (prev and prev in APOSTROPHES)) else 1
            else:
                total += 1
            prev = c
    return total


def lemma_sort_key(k):
    lemma, pos, dis, lang = k
    return (lemma.encode("utf-8"), POS_ORDER.index(pos),
            (0, b"") if dis is None else (1, dis.encode("utf-8")),
            (0, b"") if lang is None else (1, lang.encode("utf-8")))


def collation(text):
    key = []
    for c in text:
        if is_joiner(c) or is_mark(c):
            continue
        c = c.lower()
        if c.isdigit():
            key.append((0, ord(c)))
        elif c in UKR_ALPHABET:
            key.append((1, UKR_ALPHABET.index(c)))
        elif "CYRILLIC" in unicodedata.name(c, ""):
            key.append((1, 0x100 + ord(c)))
        elif is_letter(c):
            key.append((2, ord(c)))
        else:
            key.append((3, ord(c)))
    return key


def weighted_loglinear(points, full):
    import numpy as np
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.log(np.array([p[1] for p in points], dtype=float))
    w = np.array([p[2] for p in points], dtype=float)
    cols = [np.ones_like(xs), np.log(xs)] + ([xs] if full else [])
    X = np.column_stack(cols)
    sw = np.sqrt(w)
    beta, *_ = np.linalg.lstsq(X * sw[:, None], ys * sw, rcond=None)
    pred = X @ beta
    mean = np.sum(w * ys) / np.sum(w)
    rss = float(np.sum(w * (ys - pred) ** 2))
    sstot = float(np.sum(w * (ys - mean) ** 2))
    r2 = 1 - rss / sstot if sstot > 0 else 0.0
    n, k = len(points), X.shape[1] - 1
    adj = 1 - (1 - r2) * (n - 1) / (n - k - 1) if n - k - 1 > 0 else float("-inf")
    return {"A": math.exp(beta[0]), "b": float(beta[1]), "c": float(-beta[2]) if full else 0.0,
            "r_squared": r2, "adjusted_r_squared": adj}


def zipf_fit(freqs):
    import numpy as np
    r = np.arange(1, len(freqs) + 1, dtype=float)
    slope, intercept = np.polyfit(np.log(r), np.log(np.array(freqs, dtype=float)), 1)
    return {"a": float(-slope), "C": math.exp(intercept)}


# ---- driver -------------------------------------------------------------------

def read_manifest(path):
    base = os.path.dirname(os.path.abspath(path))
    docs = []
    for raw in open(path, encoding="utf-8"):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        f = line.split("\t")
        docs.append((f[0], os.path.join(base, f[1]), f[2] if len(f) > 2 else "modern_edition"))
    return docs


def recount(manifest, lexicon_path, kwic_form=None, kwic_width=5, K=10):
    lex = Lexicon.load(lexicon_path)
    keep = lex.accented()
    tokens = []  # (doc, offset, surface, norm, form_key, lemma, profile)
    for doc_id, path, profile in read_manifest(manifest):
        raw = open(path, encoding="utf-8").read().replace("\r\n", "\n").replace("\r", "\n")
        text, tags = extract_tags(expand_brackets(strip_notes(raw)))
        toks = list(tokenize(text))
        tag_at = {}
        for b, e, tag in tags:
            covering = [i for i, (o, s) in enumerate(toks) if o < e and o + len(s) > b]
            if covering:
                tag_at[covering[-1]] = tag
        for i, (off, surface) in enumerate(toks):
            norm = normalize(surface, keep)
            key, lemma = lemmatize(doc_id, off, norm, tag_at.get(i), lex)
            tokens.append((doc_id, off, surface, norm, key, lemma, profile))

    pending = [t for t in tokens if t[5] is None]
    forms = Counter(t[4] for t in tokens)
    lemmas = Counter(t[5] for t in tokens if t[5] is not None)
    lemma_forms = defaultdict(set)
    for t in tokens:
        if t[5] is not None:
            lemma_forms[t[5]].add(t[4])
    N = len(tokens)

    form_rank = sorted(forms.items(), key=lambda kv: (-kv[1], kv[0].encode("utf-8")))
    lemma_rank = sorted(lemmas.items(), key=lambda kv: (-kv[1], lemma_sort_key(kv[0])))
    alpha = sorted(lemmas.items(), key=lambda kv: (collation(kv[0][0]), kv[0][0].encode("utf-8"),
                                                    lemma_sort_key(kv[0])))

    def lemma_row(k, f):
        lemma, pos, dis, lang = k
        return [lemma, pos, dis or "", str(f), "%.6f" % (f / N), str(len(lemma_forms[k])), lang or ""]

    lists = {
        "forms_by_freq.tsv": "# rank\tform\tabs\trel\n" + "".join(
            "%d\t%s\t%d\t%.6f\n" % (i + 1, k, f, f / N) for i, (k, f) in enumerate(form_rank)),
        "lemmas_by_freq.tsv": "# rank\theadword\tpos\tdisamb\tabs\trel\tn_forms\tlanguage\n" + "".join(
            "\t".join([str(i + 1)] + lemma_row(k, f)) + "\n" for i, (k, f) in enumerate(lemma_rank)),
        "lemmas_alpha.tsv": "# headword\tpos\tdisamb\tabs\trel\tn_forms\tlanguage\n" + "".join(
            "\t".join(lemma_row(k, f)) + "\n" for k, f in alpha),
    }

    syl, pho, ratio = Counter(), Counter(), defaultdict(float)
    for form, f in forms.items():
        if script_of(form) != "cyrillic":
            continue
        s, p = syllables(form), phonemes(form)
        syl[s] += f
        pho[p] += f
        if s > 0:
            ratio[s] += f * p / s
    mean = {s: ratio[s] / syl[s] for s in ratio}
    points = [(s, mean[s], syl[s]) for s in sorted(mean)]

    lemma_freqs = [f for _, f in lemma_rank]
    cum = 0
    coverage = {}
    for i, f in enumerate(lemma_freqs):
        cum += f
        if i + 1 in (10, 100, 500, 1000, 5000) or i + 1 == len(lemma_freqs):
            coverage[str(i + 1)] = cum / N

    scripts = Counter(script_of(t[2]) for t in tokens)
    summary = {
        "N": N,
        "V_form": len(forms),
        "V_lemma": len(lemmas),
        "pending": len(pending),
        "hapax_form": sum(1 for f in forms.values() if f == 1),
        "hapax_lemma": sum(1 for f in lemmas.values() if f == 1),
        "high_freq_count": sum(1 for f in lemmas.values() if f >= K),
        "coverage": coverage,
        "token_scripts": dict(sorted(scripts.items())),
        "standalone_particles": sum(1 for t in tokens if t[6] == "first_edition" and t[3] in ("ся", "сь")),
        "syllables": {str(k): v for k, v in sorted(syl.items())},
        "phonemes": {str(k): v for k, v in sorted(pho.items())},
        "mean_phonemes_per_syllable": {str(k): v for k, v in sorted(mean.items())},
    }
    if len(points) >= 3:
        summary["menzerath_reduced"] = weighted_loglinear(points, full=False)
        summary["menzerath_full"] = weighted_loglinear(points, full=True)
    if len(lemma_freqs) >= 2:
        summary["zipf"] = zipf_fit(lemma_freqs)

    kwic = None
    if kwic_form:
        want = lex.canonical(normalize(kwic_form))
        lines = []
        for i, t in enumerate(tokens):
            if t[4] != want:
                continue
            left = [u[2] for u in tokens[max(0, i - kwic_width):i] if u[0] == t[0]]
            right = [u[2] for u in tokens[i + 1:i + 1 + kwic_width] if u[0] == t[0]]
            lines.append("%s\t%d\t%s\t%s\t%s\n" % (t[0], t[1], " ".join(left), t[2], " ".join(right)))
        kwic = "# doc_id\toffset\tleft\tkeyword\tright\n" + "".join(lines)
    return lists, summary, kwic


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--manifest", required=True)
    ap.add_argument("--lexicon", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--kwic-form")
    ap.add_argument("--kwic-width", type=int, default=5)
    ap.add_argument("-K", type=int, default=10)
    args = ap.parse_args(argv)
    lists, summary, kwic = recount(args.manifest, args.lexicon, args.kwic_form, args.kwic_width, args.K)
    os.makedirs(args.out, exist_ok=True)
    for name, text in lists.items():
        with open(os.path.join(args.out, name), "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    with open(os.path.join(args.out, "summary.json"), "w", encoding="utf-8") as f:
        json.dump(summary, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")
    if kwic is not None:
        with open(os.path.join(args.out, "kwic.tsv"), "w", encoding="utf-8", newline="\n") as f:
            f.write(kwic)
    print("N=%d V_form=%d V_lemma=%d pending=%d" % (summary["N"], summary["V_form"], summary["V_lemma"],
                                                    summary["pending"]))
    return 0


if __name__ == "__main__":
    sys.exit(main())
