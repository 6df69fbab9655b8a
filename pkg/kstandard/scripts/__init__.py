"""
Scripts subpackage: the engine, the verification suites and the command-line tooling.
"""
