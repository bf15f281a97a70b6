from teq.main import app

app(prog_name="teq")
