"""
kstandard package marker for proper module resolution in editors and runtime.
"""
