"""Test package for har-chain."""
