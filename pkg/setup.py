import setuptools

setuptools.setup(
	name="matroidlib",
	version="0.1",
	packages=["matroidlib"],
	python_requires=">=3.9",
	install_requires=[
		"click>=8.0",
		"networkx>=2.6",
		"sympy>=1.9",
		"tqdm>=4.60",
	],
	extras_require={
		"test": ["pytest>=7", "hypothesis>=6"],
	},
	entry_points={
		"console_scripts": ["matroidlib=matroidlib.cli:main"],
	},
)
