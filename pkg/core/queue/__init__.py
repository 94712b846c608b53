from .manager import EvaluationPool, resolve_workers, chunked

__all__ = ["EvaluationPool", "resolve_workers", "chunked"]
