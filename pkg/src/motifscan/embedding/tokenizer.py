"""Byte-pair-encoding text tokenizer for contrastive text encoders.

Standard CLIP-style BPE: text is lowercased and whitespace-collapsed,
split by a regex into words/digits/punctuation runs, each chunk is
mapped through a reversible byte-to-unicode table, merged greedily by
rank, and framed as [start, tokens..., end] padded with zeros.
"""

from __future__ import annotations

import html
import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

SOT_TOKEN = "<|startoftext|>"
EOT_TOKEN = "<|endoftext|>"
WORD_END = "</w>"
DEFAULT_CONTEXT_LENGTH = 77

# letters / single digits / punctuation runs, with the special tokens
# and common English contractions carved out first
_SPLIT_PATTERN = re.compile(
    r"<\|startoftext\|>|<\|endoftext\|>|'s|'t|'re|'ve|'m|'ll|'d"
    r"|[^\W\d_]+|\d|(?:[^\w\s]|_)+",
    re.IGNORECASE,
)


@lru_cache(maxsize=1)
def bytes_to_unicode() -> dict[int, str]:
    """Reversible byte -> printable unicode character table."""
    bs = (
        list(range(ord("!"), ord("~") + 1))
        + list(range(ord("\xa1"), ord("\xac") + 1))
        + list(range(ord("\xae"), ord("\xff") + 1))
    )
    cs = bs[:]
    n = 0
    for b in range(256):
        if b not in bs:
            bs.append(b)
            cs.append(256 + n)
            n += 1
    return dict(zip(bs, (chr(c) for c in cs)))


def _get_pairs(word: tuple[str, ...]) -> set[tuple[str, str]]:
    return set(zip(word, word[1:]))


@dataclass
class TokenizerAssets:
    """Vocabulary, merge ranks, and framing ids for one model."""

    vocab: dict[str, int]
    merge_ranks: dict[tuple[str, str], int]
    context_length: int = DEFAULT_CONTEXT_LENGTH
    sot_id: int = -1
    eot_id: int = -1
    _cache: dict[str, tuple[str, ...]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.sot_id < 0:
            self.sot_id = self.vocab[SOT_TOKEN]
        if self.eot_id < 0:
            self.eot_id = self.vocab[EOT_TOKEN]
        if self.context_length < 2:
            raise ValueError("context_length must be at least 2")
        if self.sot_id == self.eot_id:
            raise ValueError("start and end token ids must differ")
        missing = [a + b for (a, b) in self.merge_ranks if a + b not in self.vocab]
        if missing:
            raise ValueError(f"vocabulary lacks merge products: {missing[:5]}")
        # framing tokens encode to themselves, never byte pieces
        self._cache.setdefault(SOT_TOKEN, (SOT_TOKEN,))
        self._cache.setdefault(EOT_TOKEN, (EOT_TOKEN,))


def load_tokenizer_assets(
    vocab_path: Path, merges_path: Path, context_length: int = DEFAULT_CONTEXT_LENGTH
) -> TokenizerAssets:
    """Read vocab.json (token -> id) and merges.txt (one pair per line,
    first line a version header)."""
    vocab = json.loads(Path(vocab_path).read_text(encoding="utf-8"))
    lines = Path(merges_path).read_text(encoding="utf-8").splitlines()
    start = 1 if lines and lines[0].startswith("#") else 0
    merge_ranks = {}
    for rank, line in enumerate(lines[start:]):
        if not line.strip():
            continue
        a, b = line.split()
        merge_ranks[(a, b)] = rank
    return TokenizerAssets(vocab=vocab, merge_ranks=merge_ranks, context_length=context_length)


def _bpe(token: str, assets: TokenizerAssets) -> tuple[str, ...]:
    if token in assets._cache:
        return assets._cache[token]
    word = tuple(token[:-1]) + (token[-1] + WORD_END,)
    pairs = _get_pairs(word)
    if not pairs:
        result = (token + WORD_END,)
        assets._cache[token] = result
        return result
    while True:
        candidates = [p for p in pairs if p in assets.merge_ranks]
        if not candidates:
            break
        first, second = min(candidates, key=lambda p: assets.merge_ranks[p])
        merged = []
        i = 0
        while i < len(word):
            if i < len(word) - 1 and word[i] == first and word[i + 1] == second:
                merged.append(first + second)
                i += 2
            else:
                merged.append(word[i])
                i += 1
        word = tuple(merged)
        if len(word) == 1:
            break
        pairs = _get_pairs(word)
    assets._cache[token] = word
    return word


def encode_text(text: str, assets: TokenizerAssets) -> list[int]:
    """Raw BPE token ids without framing or padding."""
    cleaned = html.unescape(html.unescape(text))
    cleaned = re.sub(r"\s+", " ", cleaned).strip().lower()
    byte_map = bytes_to_unicode()
    ids: list[int] = []
    for chunk in _SPLIT_PATTERN.findall(cleaned):
        mapped = "".join(byte_map[b] for b in chunk.encode("utf-8"))
        for piece in _bpe(mapped, assets):
            ids.append(assets.vocab[piece])
    return ids


def tokenize(text: str, assets: TokenizerAssets) -> list[int]:
    """[sot, tokens..., eot] zero-padded to context_length.

    Overlong inputs are truncated so the end token keeps the final
    slot.
    """
    ids = [assets.sot_id, *encode_text(text, assets), assets.eot_id]
    n = assets.context_length
    if len(ids) > n:
        ids = ids[: n - 1] + [assets.eot_id]
    return ids + [0] * (n - len(ids))


def build_byte_fallback_assets(context_length: int = DEFAULT_CONTEXT_LENGTH) -> TokenizerAssets:
    """Minimal real vocabulary: every byte symbol, its word-final
    variant, and the framing tokens, with no merges. Used by the mock
    provider so tests exercise the true encode path."""
    symbols = [bytes_to_unicode()[b] for b in range(256)]
    vocab = {s: i for i, s in enumerate(symbols)}
    vocab.update({s + WORD_END: 256 + i for i, s in enumerate(symbols)})
    vocab[SOT_TOKEN] = 512
    vocab[EOT_TOKEN] = 513
    return TokenizerAssets(vocab=vocab, merge_ranks={}, context_length=context_length)
