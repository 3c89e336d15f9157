import logging
import os
import sys

sys.path.append(os.path.dirname(__file__))
sys.path.append(os.path.join(os.path.dirname(__file__), "src"))

from dotenv import load_dotenv

# endpoint tokens are read from the environment, .env included
load_dotenv()

logging.basicConfig(
    level=os.environ.get("LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)

from cli import main

if __name__ == "__main__":
    sys.exit(main())
