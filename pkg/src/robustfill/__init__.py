"""robustfill: programming-by-example string transformations.

Interprets a small regex-token DSL, synthesizes training corpora, trains
attentional sequence models from scratch (numpy reverse-mode autodiff), and
decodes programs (synthesis) or output strings (induction) from
input/output examples — robustly under character-level noise.
"""

__version__ = "0.1.0"
