"""Task scenario construction: semicircle panel layouts around the start
position, deterministic synthetic passages, and scenario (de)serialization.

Task templates: T1 = five short passages, T2 = one short, T3 = one long with
the lens disabled, T4 = two short + one long. Multi-document tasks sit on a
1.0 m semicircle; single-document tasks sit straight ahead at reading
distance.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .config import EngineConfig
from .document import DocumentContent, DocumentPanel, layout_text
from .engine import Scene
from .geometry import PanelExtent, Pose, upright_pose_facing, vec3

TRACKING_AREA_M = (1.5, 1.5)
HEAD_HEIGHT_M = 1.4
SEMICIRCLE_RADIUS_M = 1.0
READING_RADIUS_M = 0.45

SHORT_TARGET_WORDS = 100
LONG_TARGET_WORDS = 500

# deterministic filler vocabulary for synthetic passages; mostly short words
# so that ~100 words fit a 9-line by 65-character view box
_VOCAB = (
    "the a an it is was to of or and by we he she at on in for as but not "
    "one two day way sea sun rain road town door tree bird fish hand book "
    "morning evening harbor garden letter window lantern river market "
    "bridge meadow signal visitor neighbor teacher walked carried noticed "
    "answered gathered waited quiet narrow bright early wooden near old "
    "story paper record journey village station corner winter summer home"
).split()


@dataclass
class Placement:
    radius_m: float
    angle_deg: float  # 0 = straight ahead, positive = to the user's right

    def to_dict(self) -> dict:
        return {"radius_m": self.radius_m, "angle_deg": self.angle_deg}


@dataclass
class ScenarioDocument:
    content: DocumentContent
    placement: Placement

    def to_dict(self) -> dict:
        d = self.content.to_dict()
        d["placement"] = self.placement.to_dict()
        return d


@dataclass
class Scenario:
    name: str
    seed: int
    documents: list[ScenarioDocument]
    head: Pose
    config: EngineConfig = field(default_factory=EngineConfig)
    tracking_area_m: tuple[float, float] = TRACKING_AREA_M

    def __post_init__(self):
        self.validate()

    def validate(self):
        counts: dict[str, int] = {}
        for doc in self.documents:
            counts[doc.content.id] = counts.get(doc.content.id, 0) + 1
            if doc.placement.radius_m <= 0:
                raise ValueError("placement radius must be positive")
            if abs(doc.placement.angle_deg) > 90.0:
                raise ValueError("placements must stay on the front semicircle")
            # reachable shell: within the tracking area half-diagonal plus arm reach
            reach = math.hypot(*self.tracking_area_m) / 2.0 + 0.75
            if doc.placement.radius_m > reach:
                raise ValueError(f"placement radius {doc.placement.radius_m} beyond reach {reach:.2f}")
        dup = [k for k, v in counts.items() if v > 1]
        if dup:
            raise ValueError(f"duplicate document ids: {dup}")

    def build_scene(self) -> Scene:
        panels: dict[str, DocumentPanel] = {}
        contents: dict[str, DocumentContent] = {}
        cfg = self.config
        for rank, doc in enumerate(self.documents, start=1):
            pose = _place(self.head, doc.placement)
            layout = layout_text(
                doc.content, cfg.chars_per_line, cfg.visible_lines, cfg.line_spacing
            )
            panels[doc.content.id] = DocumentPanel(
                panel_id=doc.content.id,
                pose=pose,
                extent=_extent(cfg),
                content_id=doc.content.id,
                layout=layout,
                z_rank=rank,
            )
            contents[doc.content.id] = doc.content
        return Scene(panels=panels, contents=contents, head=Pose(self.head.position.copy(), self.head.orientation.copy()))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "tracking_area_m": list(self.tracking_area_m),
            "head": self.head.to_dict(),
            "config": self.config.to_dict(),
            "documents": [d.to_dict() for d in self.documents],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        docs = [
            ScenarioDocument(
                content=DocumentContent.from_dict(rec),
                placement=Placement(**rec["placement"]),
            )
            for rec in d["documents"]
        ]
        return cls(
            name=d["name"],
            seed=int(d["seed"]),
            documents=docs,
            head=Pose.from_dict(d["head"]),
            config=EngineConfig.from_dict(d["config"]),
            tracking_area_m=tuple(d.get("tracking_area_m", TRACKING_AREA_M)),
        )


def _extent(cfg: EngineConfig) -> PanelExtent:
    return PanelExtent(cfg.panel_width_m, cfg.panel_height_m)


def _place(head: Pose, placement: Placement) -> Pose:
    """Panel pose on the semicircle: at head height, facing the head, upright."""
    angle = math.radians(placement.angle_deg)
    # rotate head-forward (-Z for the canonical start pose) about +Y
    offset = vec3(
        math.sin(angle) * placement.radius_m, 0.0, -math.cos(angle) * placement.radius_m
    )
    position = head.position + offset
    return upright_pose_facing(position, head.position)


def generate_passage(
    doc_id: str,
    kind: str,
    rng: random.Random,
    chars_per_line: int = 65,
    visible_lines: int = 9,
) -> DocumentContent:
    """Deterministic synthetic passage: ~100 words (short) or ~500 (long).

    Short passages are additionally capped so they fit the view box without
    scrolling; long passages must overflow it.
    """
    target = SHORT_TARGET_WORDS if kind == "short" else LONG_TARGET_WORDS
    sentences: list[str] = []
    words = 0
    while words < target:
        n = rng.randint(7, 14)
        n = min(n, target - words) if target - words >= 4 else n
        picked = [rng.choice(_VOCAB) for _ in range(max(4, n))]
        sentence = picked[0].capitalize() + " " + " ".join(picked[1:]) + "."
        if kind == "short":
            trial = DocumentContent(id=doc_id, sentences=sentences + [sentence])
            if len(layout_text(trial, chars_per_line).lines) > visible_lines:
                break
        sentences.append(sentence)
        words += len(picked)
    return DocumentContent(id=doc_id, sentences=sentences, kind=kind)


TASK_TEMPLATES = {
    "T1": [("short", SEMICIRCLE_RADIUS_M)] * 5,
    "T2": [("short", READING_RADIUS_M)],
    "T3": [("long", READING_RADIUS_M)],
    "T4": [("short", SEMICIRCLE_RADIUS_M), ("long", SEMICIRCLE_RADIUS_M), ("short", SEMICIRCLE_RADIUS_M)],
}


def _angles(n: int) -> list[float]:
    if n == 1:
        return [0.0]
    span = 120.0
    step = span / (n - 1)
    return [-span / 2 + i * step for i in range(n)]


def build_task_scenario(
    task: str, seed: int, config_overrides: dict | None = None
) -> Scenario:
    """Scenario for one of the task templates T1..T4; deterministic per seed."""
    if task not in TASK_TEMPLATES:
        raise KeyError(f"unknown task {task!r}; expected one of {sorted(TASK_TEMPLATES)}")
    rng = random.Random(f"{task}:{seed}")  # string seeding: stable across processes
    template = TASK_TEMPLATES[task]
    angles = _angles(len(template))
    config = EngineConfig()
    docs = []
    for i, ((kind, radius), angle) in enumerate(zip(template, angles), start=1):
        content = generate_passage(
            f"{task.lower()}_doc{i}", kind, rng, config.chars_per_line, config.visible_lines
        )
        docs.append(ScenarioDocument(content, Placement(radius_m=radius, angle_deg=angle)))
    if task == "T3":
        config = config.with_overrides({"lens_enabled": False})
    if config_overrides:
        config = config.with_overrides(config_overrides)
    head = Pose(vec3(0.0, HEAD_HEIGHT_M, 0.0))
    return Scenario(name=task, seed=seed, documents=docs, head=head, config=config)


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: bad scenario JSON at line {exc.lineno}: {exc.msg}") from exc
    return Scenario.from_dict(data)


def save_scenario(path, scenario: Scenario) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(scenario.to_json() + "\n")
