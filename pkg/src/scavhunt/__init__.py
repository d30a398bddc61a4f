"""Scavenger-hunt planning: find objects with uncertain locations at least travel cost."""
