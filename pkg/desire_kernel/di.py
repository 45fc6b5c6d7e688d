from typing import Any

from injector import Injector

from desire_kernel.settings.settings import Settings, unsafe_settings
from desire_kernel.settings.settings_loader import merge_settings


def create_application_injector(overrides: dict[str, Any] | None = None) -> Injector:
    _injector = Injector(auto_bind=True)
    merged = merge_settings([unsafe_settings, overrides or {}])
    _injector.binder.bind(Settings, to=Settings(**merged))
    return _injector


"""
Global injector for the application.

Avoid using this reference, it will make your code harder to test.

Instead, build a dedicated injector with `create_application_injector`.
"""
global_injector: Injector = create_application_injector()
