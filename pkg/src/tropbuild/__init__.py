"""Newton-polygon combinatorics for GL_n Kottwitz sets and a tropical GIT
retraction from Grassmannian points over valued fields to the reduced
Bruhat-Tits building of PGL_n."""

__version__ = "0.1.0"
