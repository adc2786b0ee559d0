"""formsense: subjective evaluation of parametric glass forms.

Pipeline: staged judgments -> sparse metric MDS -> vector-model
preference mapping -> derivative-augmented quadratic appeal model ->
response-surface analysis and SVG figures.
"""

__version__ = "0.1.0"
