"""Intensional and extensional solutions of binary tasks."""
