"""Вспомогательные утилиты psfcoord."""
