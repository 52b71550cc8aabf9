import contextvars
from typing import Any, Dict

context_var: contextvars.ContextVar[Dict[str, Any]] = contextvars.ContextVar("context_var", default={})


def get_context_value(key: str) -> Any:
    return context_var.get().get(key)


def set_context_values(**kwargs: Any) -> None:
    current_values = context_var.get().copy()
    current_values.update(kwargs)
    context_var.set(current_values)
