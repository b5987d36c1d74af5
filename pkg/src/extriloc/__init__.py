"""Localizing finite-field triangulated categories at extension-closed subcategories."""

from __future__ import annotations

from .category import Category, Mor, Obj, Triangle, WindowExceeded
from .derived import DerivedDynkin
from .heart import CotorsionPair
from .localization import Localization, theorem_A_classify, verify_MR, verify_MS
from .quiver import Quiver
from .relative import ExtClass, RelStructure, classify_relative
from .stable import StableNakayama
from .subcat import Subcat, is_extension_closed

__version__ = "0.1.0"

__all__ = ["Category", "CotorsionPair", "DerivedDynkin", "ExtClass", "Localization", "Mor",
           "Obj", "Quiver", "RelStructure", "StableNakayama", "Subcat", "Triangle",
           "WindowExceeded", "classify_relative", "is_extension_closed", "theorem_A_classify",
           "verify_MR", "verify_MS"]
