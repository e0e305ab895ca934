import re
import string
from functools import lru_cache

WORD = re.compile(r"[A-Za-z']+")
STOP = {"the", "a", "an", "of", "and"}


def tokenize(text):
    return [w.lower() for w in WORD.findall(text)]


def remove_stopwords(words):
    kept = []
    for w in words:
        if w not in STOP:
            kept.append(w)
    return kept


def frequencies(words):
    freq = {}
    for w in words:
        freq[w] = freq.get(w, 0) + 1
    return freq


def top_n(freq, n=3):
    ranked = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:n]


@lru_cache(maxsize=None)
def edit_distance(a, b):
    if not a:
        return len(b)
    if not b:
        return len(a)
    cost = 0 if a[-1] == b[-1] else 1
    return min(edit_distance(a[:-1], b) + 1,
               edit_distance(a, b[:-1]) + 1,
               edit_distance(a[:-1], b[:-1]) + cost)


def is_palindrome(text):
    cleaned = [c.lower() for c in text if c.isalnum()]
    return cleaned == cleaned[::-1]


def wrap(text, width=40):
    lines = []
    current = ""
    for word in text.split():
        if len(current) + len(word) + 1 > width and current:
            lines.append(current)
            current = word
        else:
            current = word if not current else current + " " + word
    if current:
        lines.append(current)
    return lines


def strip_punctuation(text):
    table = str.maketrans("", "", string.punctuation)
    return text.translate(table)


def camel_to_snake(name):
    out = []
    for index, ch in enumerate(name):
        if ch.isupper() and index > 0:
            out.append("_")
        out.append(ch.lower())
    return "".join(out)


def snake_to_camel(name):
    head, *rest = name.split("_")
    return head + "".join(part.capitalize() for part in rest)


def count_lines(text):
    n = 0
    for line in text.splitlines():
        if line.strip():
            n += 1
    return n


def longest_word(text):
    best = ""
    for word in tokenize(text):
        if len(word) > len(best):
            best = word
    return best


def acronym(phrase):
    letters = [w[0].upper() for w in phrase.split() if w]
    return "".join(letters)


def run_length_encode(text):
    if not text:
        return []
    runs = []
    prev = text[0]
    count = 1
    for ch in text[1:]:
        if ch == prev:
            count += 1
        else:
            runs.append((prev, count))
            prev = ch
            count = 1
    runs.append((prev, count))
    return runs


def run_length_decode(runs):
    return "".join(ch * n for ch, n in runs)


def anagrams(words):
    groups = {}
    for w in words:
        key = "".join(sorted(w))
        groups.setdefault(key, []).append(w)
    return [g for g in groups.values() if len(g) > 1]


class Template:
    """Tiny ${name} substitution."""

    pattern = re.compile(r"\$\{(\w+)\}")

    def __init__(self, source):
        self.source = source

    def render(self, **values):
        def replace(match):
            key = match.group(1)
            return str(values.get(key, match.group(0)))
        return self.pattern.sub(replace, self.source)

    def names(self):
        return sorted(set(self.pattern.findall(self.source)))


def truncate(text, limit, suffix="..."):
    if len(text) <= limit:
        return text
    cut = max(limit - len(suffix), 0)
    return text[:cut] + suffix


def char_classes(text):
    digits = letters = others = 0
    for ch in text:
        if ch.isdigit():
            digits += 1
        elif ch.isalpha():
            letters += 1
        else:
            others += 1
    return digits, letters, others
