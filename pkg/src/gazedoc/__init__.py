"""gazedoc: deterministic gaze-interaction engine for reading document panels in 3D.

Core pieces: scene geometry (:mod:`gazedoc.geometry`), text layout and panels
(:mod:`gazedoc.document`), the gaze sample pipeline (:mod:`gazedoc.pipeline`),
the interaction state machines (:mod:`gazedoc.engine`), task scenarios and the
scripted reader (:mod:`gazedoc.scenario`, :mod:`gazedoc.reader`), the run loop
and metrics (:mod:`gazedoc.simulate`), the session service
(:mod:`gazedoc.service`), and the CLI (:mod:`gazedoc.cli`).
"""

__version__ = "0.1.0"
