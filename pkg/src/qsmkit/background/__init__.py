# this_file: src/qsmkit/background/__init__.py
"""Background field removal."""

from qsmkit.background.vsharp import smv_kernel, vsharp_remove

__all__ = ["smv_kernel", "vsharp_remove"]
