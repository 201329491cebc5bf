"""Tactile robot navigation toward a wall through axis-parallel rectangles."""
from .scene import (EPS, DOWN, LEFT, RIGHT, UP, BrickScene, EmbeddedOrigin, ExplicitScene,
                    Hit, Obstacle, Point, Scene, SceneError, WallHit, emit_scene,
                    gen_bricks, gen_random, parse_scene, validate)

__version__ = "0.1.0"
