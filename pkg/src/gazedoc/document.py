"""Text content, deterministic greedy line layout, and posed document panels.

Layout is monospace character-count wrap: words are never split, lines never
exceed chars_per_line, and joining the line texts with single spaces restores
the original token sequence. Scrolling is stored in lines but commanded in
sentences ("scroll by a sentence" aligns the top of the view box to the line
where a sentence starts).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np

from .geometry import Hit, PanelExtent, Pose, Ray, ray_panel_intersect, uv_to_point


class LayoutError(ValueError):
    pass


@dataclass
class DocumentContent:
    id: str
    sentences: list[str]
    kind: str = "short"  # "short" | "long"

    @property
    def word_count(self) -> int:
        return sum(len(s.split()) for s in self.sentences)

    def to_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind, "sentences": list(self.sentences)}

    @classmethod
    def from_dict(cls, d: dict) -> "DocumentContent":
        return cls(id=d["id"], sentences=list(d["sentences"]), kind=d.get("kind", "short"))


@dataclass
class Line:
    text: str
    sentence_index: int  # sentence of the line's first word
    first_word_index: int  # document-global index of the line's first word


@dataclass
class Layout:
    lines: list[Line]
    chars_per_line: int
    visible_lines: int
    line_spacing: float
    sentence_start_lines: list[int] = field(default_factory=list)
    mean_word_chars: float = 0.0  # mean word length including one trailing space

    @property
    def total_lines(self) -> int:
        return len(self.lines)


def layout_text(
    content: DocumentContent,
    chars_per_line: int,
    visible_lines: int = 9,
    line_spacing: float = 1.2,
) -> Layout:
    """Greedy word-wrap of the sentence stream into lines of at most chars_per_line.

    Raises LayoutError (naming the word) if any single word exceeds the width.
    """
    words: list[tuple[str, int]] = []  # (word, sentence_index)
    for si, sentence in enumerate(content.sentences):
        for w in sentence.split():
            if len(w) > chars_per_line:
                raise LayoutError(f"word {w!r} is longer than the line width {chars_per_line}")
            words.append((w, si))

    lines: list[Line] = []
    cur: list[str] = []
    cur_len = 0
    cur_sentence = 0
    cur_first_word = 0
    for wi, (w, si) in enumerate(words):
        add = len(w) if not cur else len(w) + 1
        if cur and cur_len + add > chars_per_line:
            lines.append(Line(" ".join(cur), cur_sentence, cur_first_word))
            cur, cur_len = [], 0
            add = len(w)
        if not cur:
            cur_sentence = si
            cur_first_word = wi
        cur.append(w)
        cur_len += add
    if cur:
        lines.append(Line(" ".join(cur), cur_sentence, cur_first_word))

    starts: list[int] = []
    seen = -1
    word_sentence = [si for _, si in words]
    for li, line in enumerate(lines):
        # a line may contain starts of several sentences; map each to this line
        span_end = lines[li + 1].first_word_index if li + 1 < len(lines) else len(words)
        for wi in range(line.first_word_index, span_end):
            if word_sentence[wi] > seen:
                seen = word_sentence[wi]
                starts.append(li)
    mean_chars = (
        sum(len(w) + 1 for w, _ in words) / len(words) if words else 0.0
    )
    return Layout(
        lines=lines,
        chars_per_line=chars_per_line,
        visible_lines=visible_lines,
        line_spacing=line_spacing,
        sentence_start_lines=starts,
        mean_word_chars=mean_chars,
    )


@dataclass
class DocumentPanel:
    panel_id: str
    pose: Pose
    extent: PanelExtent
    content_id: str
    layout: Layout
    z_rank: int
    scroll_line: int = 0
    is_document: bool = True
    highlighted: bool = False

    @property
    def max_scroll(self) -> int:
        return max(0, self.layout.total_lines - self.layout.visible_lines)

    @property
    def scrollable(self) -> bool:
        return self.layout.total_lines > self.layout.visible_lines

    def visible_window(self) -> list[Line]:
        start = self.scroll_line
        return self.layout.lines[start : start + self.layout.visible_lines]

    def intersect(self, ray: Ray) -> Hit | None:
        return ray_panel_intersect(ray, self.pose, self.extent)


def scroll_target_line(layout: Layout, scroll_line: int, n: int) -> int:
    """Top line after scrolling n sentences from the current top line.

    Scrolling down (n > 0) counts sentences from the last sentence that starts
    at or above the top line; scrolling up counts from the first sentence that
    starts at or below it. This keeps repeated one-sentence scrolls advancing
    even when several short sentences start on the same line. n = 0 is the
    identity; the result is clamped to [0, max_scroll].
    """
    if n == 0 or not layout.lines or not layout.sentence_start_lines:
        return scroll_line
    starts = layout.sentence_start_lines
    max_scroll = max(0, layout.total_lines - layout.visible_lines)
    if n > 0:
        cur = bisect.bisect_right(starts, scroll_line) - 1
    else:
        cur = bisect.bisect_left(starts, scroll_line)
    target_sentence = max(0, min(len(starts) - 1, cur + n))
    return max(0, min(max_scroll, starts[target_sentence]))


def scroll_by_sentences(panel: DocumentPanel, n: int) -> int:
    """Apply an n-sentence scroll to the panel; returns the line delta actually moved."""
    new = scroll_target_line(panel.layout, panel.scroll_line, n)
    delta = new - panel.scroll_line
    panel.scroll_line = new
    return delta


def effective_strip_frac(panel: DocumentPanel, strip_frac: float) -> float:
    """Scroll-button strips exist only on scrollable panels."""
    return strip_frac if panel.scrollable else 0.0


def row_center_v(layout: Layout, row: int, strip_frac: float) -> float:
    """v coordinate of the center of a visible row (0 = top visible row)."""
    text_top = strip_frac
    row_h = (1.0 - 2.0 * strip_frac) / layout.visible_lines
    return text_top + (row + 0.5) * row_h


def uv_to_line(panel: DocumentPanel, uv: tuple[float, float], strip_frac: float) -> int | None:
    """Absolute line index under a uv hit, or None on a button strip / padding."""
    v = uv[1]
    s = effective_strip_frac(panel, strip_frac)
    if v < s or v > 1.0 - s:
        return None
    row_h = (1.0 - 2.0 * s) / panel.layout.visible_lines
    row = int((v - s) / row_h)
    row = min(row, panel.layout.visible_lines - 1)
    if row >= len(panel.visible_window()):
        return None  # padding below a short document's last line
    return panel.scroll_line + row


def strip_under_uv(panel: DocumentPanel, uv: tuple[float, float], strip_frac: float) -> str | None:
    """'up' on the top strip, 'down' on the bottom strip, else None."""
    s = effective_strip_frac(panel, strip_frac)
    if s <= 0.0:
        return None
    v = uv[1]
    if v < s:
        return "up"
    if v > 1.0 - s:
        return "down"
    return None


def line_fixation_uv(
    panel: DocumentPanel, row: int, along: float, strip_frac: float
) -> tuple[float, float]:
    """uv of a reading fixation target: fraction `along` into the row's text."""
    line = panel.visible_window()[row]
    width_frac = len(line.text) / panel.layout.chars_per_line
    u = min(0.999, max(0.001, along * width_frac))
    v = row_center_v(panel.layout, row, effective_strip_frac(panel, strip_frac))
    return (u, v)


def panel_point(panel: DocumentPanel, uv: tuple[float, float]) -> np.ndarray:
    return uv_to_point(panel.pose, panel.extent, uv)


# --- scene picking ---


def topmost_hit(ray: Ray, panels: list[DocumentPanel]) -> tuple[DocumentPanel, Hit] | None:
    """Among all panels the ray intersects, the one with the highest z-rank."""
    best: tuple[DocumentPanel, Hit] | None = None
    for p in panels:
        hit = p.intersect(ray)
        if hit is None:
            continue
        if best is None or p.z_rank > best[0].z_rank:
            best = (p, hit)
    return best


def nearest_hit(ray: Ray, panels: list[DocumentPanel]) -> tuple[DocumentPanel, Hit] | None:
    """First panel along the ray (ties broken by z-rank, higher wins)."""
    best: tuple[DocumentPanel, Hit] | None = None
    for p in panels:
        hit = p.intersect(ray)
        if hit is None:
            continue
        if (
            best is None
            or hit.distance < best[1].distance - 1e-12
            or (abs(hit.distance - best[1].distance) <= 1e-12 and p.z_rank > best[0].z_rank)
        ):
            best = (p, hit)
    return best


def stack_under_ray(ray: Ray, panels: list[DocumentPanel]) -> list[DocumentPanel]:
    """All intersected panels, sorted by z-rank descending (top first)."""
    hits = [p for p in panels if p.intersect(ray) is not None]
    return sorted(hits, key=lambda p: -p.z_rank)
