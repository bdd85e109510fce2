"""Model store: training-corpus ingestion, enrichment, normalization, and the
on-disk model directory format.

A model is five token-frequency distributions (prefix, base, suffix, shift,
leet). Tokens for the two pattern dimensions are canonical strings such as
"[]" or "[0,-1]". Counts are kept alongside probabilities because the
explanation layer reports them as people counts.
"""

from __future__ import annotations

import math
import os
import re
from bisect import bisect_left
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

from .decompose import DIMENSIONS, decompose

MODEL_FORMAT_VERSION = 1
DEFAULT_GAMMA = 1.09
DEFAULT_MIN_LENGTH = 8
EPSILON = 0.5

META_FILE = "meta.txt"
MERGED_FILE = "merged.bin"

# Printable ASCII only (space through tilde). TAB, newlines, and anything
# non-ASCII fall outside and get the line skipped.
_BAD_CHAR_RE = re.compile(r"[^\x20-\x7e]")


class ModelError(Exception):
    """Data-level problem: unreadable corpus, malformed or missing model
    files, empty dimensions, invalid state for the requested operation."""


class IngestError(ModelError):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f"corpus line {line_number}: {reason}")
        self.line_number = line_number


@dataclass
class TrainConfig:
    min_length: int = DEFAULT_MIN_LENGTH
    ascii_only: bool = True
    enrichment: bool = True
    epsilon: float = EPSILON


@dataclass
class SkipStats:
    """Why ingested lines were dropped before training."""

    charset: int = 0  # non-printable-ASCII password (includes embedded TABs)
    length: int = 0  # shorter than min_length

    @property
    def total(self) -> int:
        return self.charset + self.length


class DimensionDistribution:
    """One dimension's tokens with counts and probabilities.

    Tokens are kept sorted lexicographically (raw byte order — all tokens are
    printable ASCII) so lookup is a binary search and the on-disk order is
    canonical.
    """

    def __init__(self, tokens: list[str], counts: list[float], probs: list[float]):
        self.tokens = tokens
        self.counts = counts
        self.probs = probs

    @classmethod
    def from_counts(cls, counts: dict[str, float]) -> "DimensionDistribution":
        tokens = sorted(counts)
        count_list = [counts[t] for t in tokens]
        total = math.fsum(count_list)
        probs = [c / total for c in count_list]
        return cls(tokens, count_list, probs)

    def __len__(self) -> int:
        return len(self.tokens)

    def _index(self, token: str) -> int | None:
        i = bisect_left(self.tokens, token)
        if i < len(self.tokens) and self.tokens[i] == token:
            return i
        return None

    def lookup(self, token: str) -> float | None:
        i = self._index(token)
        return None if i is None else self.probs[i]

    def count(self, token: str) -> float:
        i = self._index(token)
        return 0.0 if i is None else self.counts[i]

    def people(self, token: str) -> int:
        """Trained occurrence count with any fractional enrichment mass
        stripped: floor of the raw count."""
        return math.floor(self.count(token))


class Model:
    """Counts (always) plus normalized distributions and merged rank lists
    (after normalize/preprocess)."""

    def __init__(self, config: TrainConfig | None = None):
        self.config = config or TrainConfig()
        self.counts: dict[str, dict[str, float]] = {d: {} for d in DIMENSIONS}
        self.dists: dict[str, DimensionDistribution] | None = None
        self.training_population = 0
        self.skipped = SkipStats()
        self.enrichment_applied = False
        self.gamma: float = DEFAULT_GAMMA
        self.merged = None  # rank.MergedLists once preprocessed

    # -- training ---------------------------------------------------------

    def train_lines(self, lines: Iterable[str]) -> None:
        """Ingest corpus lines: either "password" or "username<TAB>password".

        The username is discarded. A password survives if it is printable
        ASCII and at least min_length characters long; each survivor's five
        decomposition tokens are counted. Multiset semantics: every line
        counts, duplicates included.
        """
        min_length = self.config.min_length
        ascii_only = self.config.ascii_only
        prefix_c = self.counts["prefix"]
        base_c = self.counts["base"]
        suffix_c = self.counts["suffix"]
        shift_c = self.counts["shift"]
        leet_c = self.counts["leet"]
        population = 0
        bad_char = _BAD_CHAR_RE.search
        for line in lines:
            line = line.rstrip("\r\n")
            tab = line.find("\t")
            password = line if tab < 0 else line[tab + 1 :]
            if len(password) < min_length:
                self.skipped.length += 1
                continue
            if ascii_only and bad_char(password) is not None:
                self.skipped.charset += 1
                continue
            d = decompose(password)
            toks = d.tokens()
            t = toks["prefix"]
            prefix_c[t] = prefix_c.get(t, 0) + 1
            t = toks["base"]
            base_c[t] = base_c.get(t, 0) + 1
            t = toks["suffix"]
            suffix_c[t] = suffix_c.get(t, 0) + 1
            t = toks["shift"]
            shift_c[t] = shift_c.get(t, 0) + 1
            t = toks["leet"]
            leet_c[t] = leet_c.get(t, 0) + 1
            population += 1
        self.training_population += population
        self.dists = None  # counts changed; normalization is stale

    def enrich(self) -> None:
        """Add fractional mass for digit-string tokens the corpus may lack.

        Every digit string of length 1-4 goes into prefix and suffix, every
        6-digit string into base: an absent token gets count epsilon, a
        present one is raised by epsilon. Enrichment ignores min_length (the
        injected tokens are sub-password parts, not passwords).
        """
        if self.enrichment_applied:
            raise ModelError("model is already enriched")
        eps = self.config.epsilon
        for dim, lengths in (("prefix", (1, 2, 3, 4)), ("suffix", (1, 2, 3, 4)), ("base", (6,))):
            counts = self.counts[dim]
            for k in lengths:
                for i in range(10**k):
                    token = "%0*d" % (k, i)
                    counts[token] = counts.get(token, 0) + eps
        self.enrichment_applied = True
        self.dists = None

    def normalize(self) -> None:
        """Turn raw counts into probability distributions. Every dimension
        must be non-empty: an unusable model is an error, not a silent one."""
        dists = {}
        for dim in DIMENSIONS:
            if not self.counts[dim]:
                raise ModelError(f"dimension '{dim}' is empty; nothing was trained")
            dists[dim] = DimensionDistribution.from_counts(self.counts[dim])
        self.dists = dists

    # -- queries ----------------------------------------------------------

    def _dist(self, dimension: str) -> DimensionDistribution:
        if self.dists is None:
            raise ModelError("model is not normalized")
        return self.dists[dimension]

    def lookup(self, dimension: str, token: str) -> float | None:
        return self._dist(dimension).lookup(token)

    def people(self, dimension: str, token: str) -> int:
        return self._dist(dimension).people(token)

    def volume(self) -> int:
        if self.dists is None:
            raise ModelError("model is not normalized")
        v = 1
        for dim in DIMENSIONS:
            v *= len(self.dists[dim])
        return v

    def stats(self) -> dict:
        if self.dists is None:
            raise ModelError("model is not normalized")
        out = {
            "tokens": {d: len(self.dists[d]) for d in DIMENSIONS},
            "volume": self.volume(),
            "training_population": self.training_population,
            "enrichment": self.enrichment_applied,
            "gamma": self.gamma,
        }
        if self.merged is not None:
            out["merged_entries"] = self.merged.entry_count()
        return out

    # -- persistence ------------------------------------------------------

    def save(self, directory: str) -> None:
        if self.dists is None:
            raise ModelError("model is not normalized; nothing to save")
        os.makedirs(directory, exist_ok=True)
        for dim in DIMENSIONS:
            dist = self.dists[dim]
            path = os.path.join(directory, f"{dim}.tsv")
            with open(path, "w", encoding="ascii", newline="") as f:
                for token, count, prob in zip(dist.tokens, dist.counts, dist.probs):
                    f.write(f"{token}\t{float(count)!r}\t{prob!r}\n")
        meta_path = os.path.join(directory, META_FILE)
        with open(meta_path, "w", encoding="ascii", newline="") as f:
            f.write(f"version = {MODEL_FORMAT_VERSION}\n")
            f.write(f"gamma = {self.gamma!r}\n")
            f.write(f"training_population = {self.training_population}\n")
            f.write(f"min_length = {self.config.min_length}\n")
            f.write(f"epsilon = {self.config.epsilon!r}\n")
            f.write(f"enrichment = {'true' if self.enrichment_applied else 'false'}\n")
        if self.merged is not None:
            from . import rank

            rank.save_merged(self.merged, os.path.join(directory, MERGED_FILE))

    @classmethod
    def load(cls, directory: str) -> "Model":
        model = cls()
        meta_path = os.path.join(directory, META_FILE)
        if not os.path.isfile(meta_path):
            raise ModelError(f"model directory is missing '{META_FILE}': {directory}")
        meta: dict[str, str] = {}
        with open(meta_path, "r", encoding="ascii") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise ModelError(f"malformed meta line: {line!r}")
                meta[key.strip()] = value.strip()
        try:
            version = int(meta["version"])
            model.gamma = float(meta["gamma"])
            model.training_population = int(meta["training_population"])
            model.config.min_length = int(meta["min_length"])
            model.config.epsilon = float(meta["epsilon"])
            model.enrichment_applied = meta["enrichment"] == "true"
        except KeyError as e:
            raise ModelError(f"meta file is missing key {e.args[0]!r}") from None
        except ValueError as e:
            raise ModelError(f"meta file has a malformed value: {e}") from None
        if version != MODEL_FORMAT_VERSION:
            raise ModelError(f"unsupported model format version {version}")

        dists = {}
        for dim in DIMENSIONS:
            path = os.path.join(directory, f"{dim}.tsv")
            if not os.path.isfile(path):
                raise ModelError(f"model directory is missing '{dim}.tsv': {directory}")
            tokens: list[str] = []
            counts: list[float] = []
            probs: list[float] = []
            with open(path, "r", encoding="ascii", newline="") as f:
                for n, line in enumerate(f, 1):
                    parts = line.rstrip("\n").split("\t")
                    if len(parts) != 3:
                        raise ModelError(f"{dim}.tsv line {n}: expected 3 tab-separated fields")
                    tokens.append(parts[0])
                    try:
                        counts.append(float(parts[1]))
                        probs.append(float(parts[2]))
                    except ValueError:
                        raise ModelError(f"{dim}.tsv line {n}: malformed number") from None
            if not tokens:
                raise ModelError(f"dimension '{dim}' is empty in {directory}")
            if any(tokens[i] >= tokens[i + 1] for i in range(len(tokens) - 1)):
                raise ModelError(f"{dim}.tsv tokens are not sorted/unique")
            dists[dim] = DimensionDistribution(tokens, counts, probs)
            model.counts[dim] = dict(zip(tokens, counts))
        model.dists = dists

        merged_path = os.path.join(directory, MERGED_FILE)
        if os.path.isfile(merged_path):
            from . import rank

            model.merged = rank.load_merged(merged_path)
        return model


def iter_corpus_lines(stream: IO[bytes], name: str = "<corpus>") -> Iterator[str]:
    """Decode a corpus byte stream line by line so decoding failures carry a
    line number. Valid non-ASCII UTF-8 is decoded and later dropped by the
    charset filter; bytes that are not UTF-8 at all are an ingestion error."""
    for n, raw in enumerate(stream, 1):
        try:
            yield raw.decode("utf-8")
        except UnicodeDecodeError:
            raise IngestError(n, f"undecodable bytes in {name}") from None


def train(corpus_path: str, config: TrainConfig | None = None) -> Model:
    """Train a model from a corpus file: ingest, optionally enrich, normalize."""
    model = Model(config)
    with open(corpus_path, "rb") as f:
        model.train_lines(iter_corpus_lines(f, corpus_path))
    if model.config.enrichment:
        model.enrich()
    model.normalize()
    return model


def model_from_distributions(
    dims: dict[str, dict[str, float]],
    population: int = 0,
) -> Model:
    """Build a normalized model directly from per-dimension token->probability
    (or token->count) maps. Test and experiment helper: values are treated as
    counts, so passing probabilities yields those same probabilities."""
    model = Model(TrainConfig(enrichment=False))
    for dim in DIMENSIONS:
        if dim not in dims or not dims[dim]:
            raise ModelError(f"dimension '{dim}' is empty")
        model.counts[dim] = dict(dims[dim])
    model.training_population = population
    model.normalize()
    return model
