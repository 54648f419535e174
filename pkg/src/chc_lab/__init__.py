"""Comprehension-predicate workbench over the language of membership and equality."""

__version__ = "0.1.0"
