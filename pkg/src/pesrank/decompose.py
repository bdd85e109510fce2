"""Five-dimensional password decomposition.

A password splits into (prefix, base, suffix, shift pattern, l33t pattern):

* prefix / suffix: the non-letter characters before the first and after the
  last letter;
* base: everything from the leftmost to the rightmost letter, canonicalized
  to lowercase with l33t symbols undone;
* shift pattern: which base positions were capitalized;
* l33t pattern: which visual symbol substitutions were applied.

Decomposition order matters: capitalization is extracted before l33t symbols
are undone. This is safe because every l33t substitution is single-character,
so base positions are identical before and after the un-substitution.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# Numbered substitution rules: replacement number -> (source letter, symbol).
# Several letters have more than one symbol (e.g. 'a' -> '@' or '4'); each
# (letter, symbol) combination carries its own number.
LEET_RULES: dict[int, tuple[str, str]] = {
    1: ("o", "0"),
    2: ("a", "@"),
    3: ("a", "4"),
    4: ("s", "$"),
    5: ("s", "5"),
    6: ("e", "3"),
    7: ("g", "6"),
    8: ("g", "9"),
    9: ("t", "+"),
    10: ("t", "7"),
    11: ("z", "2"),
    12: ("i", "1"),
    13: ("i", "!"),
    14: ("x", "%"),
}

# symbol -> (number, source letter); symbols are unique across rules.
_SYMBOL_RULE: dict[str, tuple[int, str]] = {
    sym: (num, letter) for num, (letter, sym) in LEET_RULES.items()
}

_LETTER_RE = re.compile(r"[A-Za-z]")
# prefix = longest non-letter run from the start, base = through the last
# letter (greedy), suffix = the rest.
_SPLIT_RE = re.compile(r"^([^A-Za-z]*)(.*[A-Za-z])([^A-Za-z]*)$")

DIMENSIONS = ("prefix", "base", "suffix", "shift", "leet")


@dataclass(frozen=True)
class Decomposition:
    prefix: str
    base: str
    suffix: str
    shift: tuple[int, ...]
    leet: tuple[int, ...]

    def tokens(self) -> dict[str, str]:
        """The five dimension tokens in their canonical string form."""
        return {
            "prefix": self.prefix,
            "base": self.base,
            "suffix": self.suffix,
            "shift": pattern_token(self.shift),
            "leet": pattern_token(self.leet),
        }


def pattern_token(pattern: tuple[int, ...] | list[int]) -> str:
    """Canonical string form of a shift or l33t pattern: "[]", "[0,-1]"..."""
    return "[" + ",".join(str(i) for i in pattern) + "]"


def parse_pattern_token(token: str) -> tuple[int, ...]:
    """Inverse of pattern_token. Raises ValueError on malformed tokens."""
    if len(token) < 2 or token[0] != "[" or token[-1] != "]":
        raise ValueError(f"malformed pattern token: {token!r}")
    body = token[1:-1]
    if not body:
        return ()
    return tuple(int(part) for part in body.split(","))


def split3(password: str) -> tuple[str, str, str]:
    """Split into (prefix, core, suffix) at the outermost letters.

    A password without letters is all core: ("", password, "").
    """
    m = _SPLIT_RE.match(password)
    if m is None:
        return "", password, ""
    return m.group(1), m.group(2), m.group(3)


def extract_shift(core: str) -> tuple[str, tuple[int, ...]]:
    """Lowercase the core and record which positions were capitals.

    A position j is stored as j (0-based from the start) when j < n/2, else
    as j - n (negative, -1-based from the end). Indices come out in
    increasing character-position order and are unique by construction.
    """
    n = len(core)
    shift = tuple(
        j if 2 * j < n else j - n
        for j, c in enumerate(core)
        if "A" <= c <= "Z"
    )
    return core.lower(), shift


def apply_shift(word: str, shift: tuple[int, ...] | list[int]) -> str:
    """Capitalize the given positions. Out-of-range indices and indices
    landing on non-letters are silently skipped (degenerate patterns are a
    modeling feature, not an error)."""
    if not shift:
        return word
    n = len(word)
    chars = list(word)
    for idx in shift:
        pos = idx if idx >= 0 else idx + n
        if 0 <= pos < n and "a" <= chars[pos] <= "z":
            chars[pos] = chars[pos].upper()
    return "".join(chars)


def extract_leet(core: str) -> tuple[str, tuple[int, ...]]:
    """Undo l33t symbol substitutions in a lowercase core.

    Scanning left to right, the first symbol seen for each source letter
    decides that letter's replacement number; every occurrence of that exact
    symbol is then turned back into the letter. Unrecorded sibling symbols of
    the same letter (e.g. a later '4' after '@' already claimed 'a') stay as
    they are. A core without any letter is returned unchanged with an empty
    pattern — digit strings such as dates must not be misread as l33t.
    """
    if _LETTER_RE.search(core) is None:
        return core, ()
    pattern: list[int] = []
    claimed: set[str] = set()
    table: dict[int, str] = {}
    for ch in core:
        rule = _SYMBOL_RULE.get(ch)
        if rule is not None and rule[1] not in claimed:
            claimed.add(rule[1])
            pattern.append(rule[0])
            table[ord(ch)] = rule[1]
    if not table:
        return core, ()
    return core.translate(table), tuple(pattern)


def apply_leet(word: str, pattern: tuple[int, ...] | list[int]) -> str:
    """Apply numbered substitutions: every occurrence of each rule's source
    letter becomes its symbol. A rule whose letter is absent is a no-op."""
    if not pattern:
        return word
    table: dict[int, str] = {}
    for num in pattern:
        rule = LEET_RULES.get(num)
        if rule is None:
            raise ValueError(f"unknown l33t replacement number: {num}")
        table[ord(rule[0])] = rule[1]
    return word.translate(table)


def decompose(password: str) -> Decomposition:
    """Total decomposition of any ASCII string; never raises."""
    prefix, core, suffix = split3(password)
    lowered, shift = extract_shift(core)
    base, leet = extract_leet(lowered)
    return Decomposition(prefix, base, suffix, shift, leet)


def recompose(
    prefix: str,
    base: str,
    suffix: str,
    shift: tuple[int, ...] | list[int],
    leet: tuple[int, ...] | list[int],
) -> str:
    """Inverse direction: rebuild the password a cracker would emit.

    L33t first, then shift: shift indices landing on substituted (non-letter)
    characters degenerate to no-ops, mirroring extraction order.
    """
    return prefix + apply_shift(apply_leet(base, leet), shift) + suffix


def recompose_decomposition(d: Decomposition) -> str:
    return recompose(d.prefix, d.base, d.suffix, d.shift, d.leet)
