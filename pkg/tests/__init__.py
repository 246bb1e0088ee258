"""Unit test package for oam_transcoder."""
