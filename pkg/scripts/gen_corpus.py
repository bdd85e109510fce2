"""Generate a synthetic leak-style corpus for benchmarks and experiments.

Lines look like real-world passwords built from a base word plus affixes,
capitalization, and symbol substitutions, with a heavy-tailed base-word
distribution, so trained models have realistic shape without any real data.

Usage:
    python3 scripts/gen_corpus.py OUT_PATH [-n LINES] [--seed SEED] [--usernames]
"""

import argparse
import random

BASE_WORDS = [
    "password", "iloveyou", "sunshine", "princess", "football", "charlie",
    "dragon", "monkey", "shadow", "master", "qwerty", "welcome", "superman",
    "michael", "jordan", "killer", "hunter", "soccer", "batman", "tigger",
    "pepper", "ginger", "summer", "ashley", "bailey", "buster", "jessica",
    "daniel", "matrix", "falcon", "silver", "orange", "purple", "cookie",
    "banana", "flower", "winter", "diamond", "rocket", "thunder",
]

FIRST_NAMES = [
    "adam", "alice", "bob", "carol", "dave", "erin", "frank", "grace",
    "heidi", "ivan", "judy", "karl", "laura", "mike", "nina", "oscar",
]

LEET_SUBS = [("a", "@"), ("a", "4"), ("o", "0"), ("s", "$"), ("s", "5"), ("e", "3"), ("i", "1")]


def sample_password(rng: random.Random) -> str:
    # Zipf-ish base choice: squared-uniform index favors early (popular) words
    idx = int((rng.random() ** 2) * len(BASE_WORDS))
    base = BASE_WORDS[min(idx, len(BASE_WORDS) - 1)]
    style = rng.random()
    if style < 0.35:
        pw = base + str(rng.randrange(0, 10000))
    elif style < 0.55:
        pw = base.capitalize() + str(rng.randrange(10, 100))
    elif style < 0.65:
        pw = str(rng.randrange(1, 1000)) + base
    elif style < 0.75:
        letter, symbol = rng.choice(LEET_SUBS)
        pw = base.replace(letter, symbol) + str(rng.randrange(1, 100))
    elif style < 0.85:
        pw = base + rng.choice(["!", "!!", "!1", "#1", "?"])
    elif style < 0.93:
        pw = base + str(rng.randrange(1950, 2030))
    else:
        pw = str(rng.randrange(10_000_000, 100_000_000))  # all-digit password
    if len(pw) < 8:
        pw = pw + "1234567890"[: 8 - len(pw)]
    return pw


def generate_lines(n: int, seed: int = 1, usernames: bool = False):
    rng = random.Random(seed)
    for i in range(n):
        pw = sample_password(rng)
        if usernames:
            name = rng.choice(FIRST_NAMES) + str(rng.randrange(1, 1000))
            yield f"{name}\t{pw}"
        else:
            yield pw


def write_corpus(path: str, n: int, seed: int = 1, usernames: bool = False) -> None:
    with open(path, "w", encoding="ascii") as f:
        for line in generate_lines(n, seed=seed, usernames=usernames):
            f.write(line + "\n")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out")
    ap.add_argument("-n", "--lines", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--usernames", action="store_true", help="emit username<TAB>password lines")
    args = ap.parse_args()
    write_corpus(args.out, args.lines, seed=args.seed, usernames=args.usernames)
    print(f"wrote {args.lines} lines to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
