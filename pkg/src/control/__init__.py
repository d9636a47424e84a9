"""Whole-body upper-body controller: task-space wrenches and joint-space commands."""
