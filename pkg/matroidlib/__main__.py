from matroidlib.cli import main

main(prog_name="matroidlib")
